use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Widest word the crate handles. Oracle tables need `2^n` entries, so
/// practical widths are far smaller; basis indices must fit in `u64`.
pub const MAX_WORD_WIDTH: usize = 31;

/// A word in `{0,1}^n`.
///
/// Bit `s_1` (the first character of the textual form) is the most
/// significant bit of [`BitWord::value`], which doubles as the table index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BitWord {
    value: u64,
    width: usize,
}

impl BitWord {
    pub fn new(value: u64, width: usize) -> Result<Self> {
        check_width(width)?;
        if value >> width != 0 {
            return Err(Error::ValueOutOfRange { value, width });
        }
        Ok(BitWord { value, width })
    }

    pub fn zero(width: usize) -> Result<Self> {
        BitWord::new(0, width)
    }

    /// Bits in order `s_1, s_2, …, s_n`.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        BitWord::new(value, bits.len())
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn index(&self) -> usize {
        self.value as usize
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Bit `s_k`, 1-indexed from the most significant end.
    pub fn bit(&self, k: usize) -> bool {
        assert!(k >= 1 && k <= self.width, "bit {k} outside 1..={}", self.width);
        (self.value >> (self.width - k)) & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (1..=self.width).map(|k| self.bit(k)).collect()
    }

    /// All `2^width` words in increasing order.
    pub fn all(width: usize) -> Result<impl Iterator<Item = BitWord>> {
        check_width(width)?;
        Ok((0..1u64 << width).map(move |value| BitWord { value, width }))
    }

    pub(crate) fn from_raw(value: u64, width: usize) -> Self {
        debug_assert!(value >> width == 0);
        BitWord { value, width }
    }
}

pub(crate) fn check_width(width: usize) -> Result<()> {
    if width == 0 || width > MAX_WORD_WIDTH {
        return Err(Error::InvalidWidth(width));
    }
    Ok(())
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 1..=self.width {
            f.write_str(if self.bit(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl From<BitWord> for String {
    fn from(w: BitWord) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for BitWord {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse { line: 0, message: format!("invalid bit {other:?} in {s:?}") }),
            })
            .collect::<Result<Vec<_>>>()?;
        BitWord::from_bits(&bits)
    }
}

/// A set of words of one common width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSet {
    width: usize,
    members: BTreeSet<u64>,
}

impl WordSet {
    pub fn empty(width: usize) -> Result<Self> {
        check_width(width)?;
        Ok(WordSet { width, members: BTreeSet::new() })
    }

    /// The full cube `{0,1}^width`.
    pub fn full(width: usize) -> Result<Self> {
        check_width(width)?;
        Ok(WordSet { width, members: (0..1u64 << width).collect() })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn insert(&mut self, w: BitWord) -> Result<bool> {
        self.check(&w)?;
        Ok(self.members.insert(w.value))
    }

    pub fn remove(&mut self, w: &BitWord) -> bool {
        w.width == self.width && self.members.remove(&w.value)
    }

    pub fn contains(&self, w: &BitWord) -> bool {
        w.width == self.width && self.members.contains(&w.value)
    }

    pub fn is_subset(&self, other: &WordSet) -> bool {
        self.width == other.width && self.members.is_subset(&other.members)
    }

    /// Keep members satisfying `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(BitWord) -> bool) {
        let width = self.width;
        self.members.retain(|&v| keep(BitWord::from_raw(v, width)));
    }

    pub fn iter(&self) -> impl Iterator<Item = BitWord> + '_ {
        self.members.iter().map(move |&v| BitWord::from_raw(v, self.width))
    }

    /// The `k`-th smallest member.
    pub fn nth(&self, k: usize) -> Option<BitWord> {
        self.members.iter().nth(k).map(|&v| BitWord::from_raw(v, self.width))
    }

    fn check(&self, w: &BitWord) -> Result<()> {
        if w.width != self.width {
            return Err(Error::WidthMismatch { expected: self.width, found: w.width });
        }
        Ok(())
    }
}
