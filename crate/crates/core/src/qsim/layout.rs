use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::oracle::{BitWord, MAX_WORD_WIDTH};

/// Default ceiling on simulated qubits for dense state vectors.
pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Hard ceiling for layouts simulated by basis tracking; indices are `u64`.
pub const BASIS_QUBIT_CAP: usize = 62;

/// Environment override for the dense qubit cap.
pub const QUBIT_CAP_ENV: &str = "QQLAB_QUBIT_CAP";

/// Dense qubit cap, honoring `QQLAB_QUBIT_CAP`.
pub fn qubit_cap() -> usize {
    std::env::var(QUBIT_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&c| c >= 2 && c <= BASIS_QUBIT_CAP)
        .unwrap_or(DEFAULT_QUBIT_CAP)
}

/// Working register of `work` qubits followed by a `2n`-qubit query register.
///
/// Qubit positions are 1-based: working qubits `1..=τ`, query address half
/// `τ+1..=τ+n`, answer half `τ+n+1..=τ+2n`.
///
/// Basic-state index encoding, from the low end: the address half occupies
/// bits `0..n` (its integer value is the address word), the answer half bits
/// `n..2n`, and the working register the bits above. Within each register the
/// lowest-numbered position is the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QubitLayout {
    work: usize,
    query_width: usize,
}

impl QubitLayout {
    /// Layout admitted under the dense cap.
    pub fn new(work: usize, query_width: usize) -> Result<Self> {
        QubitLayout::with_cap(work, query_width, qubit_cap())
    }

    pub fn with_cap(work: usize, query_width: usize, cap: usize) -> Result<Self> {
        if query_width == 0 || query_width > MAX_WORD_WIDTH {
            return Err(Error::InvalidWidth(query_width));
        }
        let required = work + 2 * query_width;
        let cap = cap.min(BASIS_QUBIT_CAP);
        if required > cap {
            return Err(Error::CapExceeded { required, cap, unit: "qubit count" });
        }
        Ok(QubitLayout { work, query_width })
    }

    pub fn work(&self) -> usize {
        self.work
    }

    pub fn query_width(&self) -> usize {
        self.query_width
    }

    pub fn total(&self) -> usize {
        self.work + 2 * self.query_width
    }

    /// Number of basic states `K = 2^(τ+2n)`.
    pub fn dim(&self) -> usize {
        1usize << self.total()
    }

    pub fn work_positions(&self) -> RangeInclusive<usize> {
        1..=self.work
    }

    pub fn address_positions(&self) -> RangeInclusive<usize> {
        self.work + 1..=self.work + self.query_width
    }

    pub fn answer_positions(&self) -> RangeInclusive<usize> {
        self.work + self.query_width + 1..=self.total()
    }

    /// Bit of the basic-state index that carries qubit `position`.
    pub fn bit_of(&self, position: usize) -> Result<usize> {
        let n = self.query_width;
        let tau = self.work;
        match position {
            p if p >= 1 && p <= tau => Ok(2 * n + (tau - p)),
            p if p > tau && p <= tau + n => Ok(n - (p - tau)),
            p if p > tau + n && p <= tau + 2 * n => Ok(n + (n - (p - tau - n))),
            _ => Err(Error::TargetOutOfRange { position, total: self.total() }),
        }
    }

    #[inline]
    pub fn address_mask(&self) -> u64 {
        (1u64 << self.query_width) - 1
    }

    /// Address word `q(e_j)` of basic state `j`, as an integer.
    #[inline]
    pub fn address_of(&self, index: u64) -> u64 {
        index & self.address_mask()
    }

    /// Answer-half contents of basic state `j`.
    #[inline]
    pub fn answer_of(&self, index: u64) -> u64 {
        (index >> self.query_width) & self.address_mask()
    }

    pub(crate) fn check_word(&self, a: &BitWord) -> Result<()> {
        if a.width() != self.query_width {
            return Err(Error::WidthMismatch { expected: self.query_width, found: a.width() });
        }
        Ok(())
    }

    /// Read the qubits at `positions` out of basic state `index`; the first
    /// position becomes the most significant bit.
    pub fn read_positions(&self, index: u64, positions: &[usize]) -> Result<u64> {
        positions.iter().try_fold(0u64, |acc, &p| Ok((acc << 1) | ((index >> self.bit_of(p)?) & 1)))
    }

    pub(crate) fn check_same(&self, other: &QubitLayout) -> Result<()> {
        if self != other {
            return Err(Error::LayoutMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// A total assignment of bits to positions `1..=τ+2n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisAssignment {
    bits: Vec<bool>,
}

impl BasisAssignment {
    pub fn zeros(layout: &QubitLayout) -> Self {
        BasisAssignment { bits: vec![false; layout.total()] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BasisAssignment { bits }
    }

    pub fn from_index(layout: &QubitLayout, index: u64) -> Self {
        let bits = (1..=layout.total())
            .map(|p| (index >> layout.bit_of(p).expect("position in range")) & 1 == 1)
            .collect();
        BasisAssignment { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, position: usize) -> bool {
        self.bits[position - 1]
    }

    pub fn set(&mut self, position: usize, value: bool) {
        self.bits[position - 1] = value;
    }

    /// Write `word` onto consecutive positions starting at `first`.
    pub fn write_word(&mut self, first: usize, word: &BitWord) {
        for (k, b) in word.bits().into_iter().enumerate() {
            self.set(first + k, b);
        }
    }

    pub fn to_index(&self, layout: &QubitLayout) -> Result<u64> {
        if self.bits.len() != layout.total() {
            return Err(Error::LayoutMismatch(format!(
                "assignment covers {} positions, layout has {}",
                self.bits.len(),
                layout.total()
            )));
        }
        let mut index = 0u64;
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                index |= 1 << layout.bit_of(i + 1)?;
            }
        }
        Ok(index)
    }

    /// The address word `q(e)`.
    pub fn address(&self, layout: &QubitLayout) -> Result<BitWord> {
        let idx = self.to_index(layout)?;
        BitWord::new(layout.address_of(idx), layout.query_width())
    }

    pub fn read_word(&self, positions: &[usize]) -> Result<BitWord> {
        BitWord::from_bits(&positions.iter().map(|&p| self.get(p)).collect::<Vec<_>>())
    }
}
