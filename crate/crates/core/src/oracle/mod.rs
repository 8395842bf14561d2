//! Length-preserving black-box functions at a fixed width.

mod format;
mod word;

use std::sync::Arc;

use rand::Rng;

pub use self::format::{parse_oracle, write_oracle};
pub use self::word::{BitWord, WordSet, MAX_WORD_WIDTH};

use self::word::check_width;
use crate::error::{Error, Result};
use crate::rng::{stream, SeedSpec};

/// A total function `{0,1}^n -> {0,1}^n`, stored as a table indexed by the
/// integer encoding of the argument.
///
/// Tables are immutable and cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OracleTable {
    width: usize,
    table: Arc<[u64]>,
}

impl OracleTable {
    pub fn new(width: usize, entries: &[BitWord]) -> Result<Self> {
        check_width(width)?;
        let expected = 1usize << width;
        if entries.len() != expected {
            return Err(Error::LengthMismatch { expected, found: entries.len() });
        }
        if let Some(bad) = entries.iter().find(|w| w.width() != width) {
            return Err(Error::WidthMismatch { expected: width, found: bad.width() });
        }
        Ok(OracleTable { width, table: entries.iter().map(BitWord::value).collect() })
    }

    /// Build from raw integer values; each must be `< 2^width`.
    pub fn from_values(width: usize, values: Vec<u64>) -> Result<Self> {
        check_width(width)?;
        let expected = 1usize << width;
        if values.len() != expected {
            return Err(Error::LengthMismatch { expected, found: values.len() });
        }
        if let Some(&bad) = values.iter().find(|&&v| v >> width != 0) {
            return Err(Error::ValueOutOfRange { value: bad, width });
        }
        Ok(OracleTable { width, table: values.into() })
    }

    pub fn from_fn(width: usize, mut f: impl FnMut(u64) -> u64) -> Result<Self> {
        check_width(width)?;
        let values = (0..1u64 << width).map(|x| f(x)).collect();
        OracleTable::from_values(width, values)
    }

    pub fn identity(width: usize) -> Result<Self> {
        OracleTable::from_fn(width, |x| x)
    }

    /// Each entry independent and uniform on `{0,1}^width`.
    pub fn sample<R: Rng + ?Sized>(width: usize, rng: &mut R) -> Result<Self> {
        check_width(width)?;
        let bound = 1u64 << width;
        OracleTable::from_fn(width, |_| rng.random_range(0..bound))
    }

    /// Uniform on `{0,1}^width` conditioned on the orbit `x, f(x), …, f^{len-1}(x)`
    /// consisting of `len` distinct words. Requires `len <= 2^width`.
    pub fn sample_distinct_orbit<R: Rng + ?Sized>(width: usize, start: BitWord, len: usize, rng: &mut R) -> Result<Self> {
        check_width(width)?;
        if start.width() != width {
            return Err(Error::WidthMismatch { expected: width, found: start.width() });
        }
        let size = 1usize << width;
        if len == 0 || len > size {
            return Err(Error::InvalidParameters(format!("orbit length {len} outside 1..={size}")));
        }
        let mut values: Vec<u64> = (0..size).map(|_| rng.random_range(0..size as u64)).collect();
        let mut used = vec![false; size];
        let mut current = start.index();
        used[current] = true;
        for _ in 1..len {
            let remaining: Vec<usize> = (0..size).filter(|&w| !used[w]).collect();
            let next = remaining[rng.random_range(0..remaining.len())];
            values[current] = next as u64;
            used[next] = true;
            current = next;
        }
        OracleTable::from_values(width, values)
    }

    /// The `k`-th table of `M_width` in the enumeration where entry `x` is
    /// base-`2^width` digit `x` of `k`. Covers `M_width` as `k` ranges over
    /// `0..2^(width * 2^width)`.
    pub fn enumerated(width: usize, mut k: u128) -> Result<Self> {
        check_width(width)?;
        if width * (1 << width) > 127 {
            return Err(Error::InvalidParameters(format!("M_{width} is too large to enumerate")));
        }
        let base = 1u128 << width;
        let values = (0..1u64 << width)
            .map(|_| {
                let digit = (k % base) as u64;
                k /= base;
                digit
            })
            .collect();
        OracleTable::from_values(width, values)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn values(&self) -> &[u64] {
        &self.table
    }

    /// Raw lookup by index; `x` must be `< 2^width`.
    #[inline]
    pub fn lookup(&self, x: u64) -> u64 {
        self.table[x as usize]
    }

    pub fn eval(&self, x: &BitWord) -> Result<BitWord> {
        self.check(x)?;
        Ok(BitWord::from_raw(self.lookup(x.value()), self.width))
    }

    /// `f^{k}(x)` by `k` sequential lookups.
    pub fn iterate(&self, x: &BitWord, k: u64) -> Result<BitWord> {
        self.check(x)?;
        let mut v = x.value();
        for _ in 0..k {
            v = self.lookup(v);
        }
        Ok(BitWord::from_raw(v, self.width))
    }

    /// `[x, f(x), …, f^{len-1}(x)]`.
    pub fn orbit(&self, x: &BitWord, len: usize) -> Result<Vec<BitWord>> {
        self.check(x)?;
        let mut out = Vec::with_capacity(len);
        let mut v = x.value();
        for _ in 0..len {
            out.push(BitWord::from_raw(v, self.width));
            v = self.lookup(v);
        }
        Ok(out)
    }

    /// A fresh table equal to `self` except at `x`, where it takes `y`.
    pub fn mutate(&self, x: &BitWord, y: &BitWord) -> Result<Self> {
        self.check(x)?;
        self.check(y)?;
        let mut values = self.table.to_vec();
        values[x.index()] = y.value();
        Ok(OracleTable { width: self.width, table: values.into() })
    }

    /// Words on which the two tables disagree.
    pub fn diff_set(&self, other: &OracleTable) -> Result<WordSet> {
        if other.width != self.width {
            return Err(Error::WidthMismatch { expected: self.width, found: other.width });
        }
        let mut set = WordSet::empty(self.width)?;
        for (x, (a, b)) in self.table.iter().zip(other.table.iter()).enumerate() {
            if a != b {
                set.insert(BitWord::from_raw(x as u64, self.width))?;
            }
        }
        Ok(set)
    }

    fn check(&self, x: &BitWord) -> Result<()> {
        if x.width() != self.width {
            return Err(Error::WidthMismatch { expected: self.width, found: x.width() });
        }
        Ok(())
    }
}

pub fn make_oracle(n: usize, entries: &[BitWord]) -> Result<OracleTable> {
    OracleTable::new(n, entries)
}

/// Deterministic uniform draw from `M_n` on the oracle stream of `seed`.
pub fn sample_uniform_oracle(n: usize, seed: SeedSpec) -> Result<OracleTable> {
    OracleTable::sample(n, &mut seed.with_stream(stream::ORACLE).rng())
}

/// `v_n = 2^(n 2^n)`, the number of tables of width `n`, when it fits in `u128`.
pub fn table_count(n: usize) -> Option<u128> {
    let bits = n.checked_mul(1usize.checked_shl(n as u32)?)?;
    1u128.checked_shl(bits as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    fn not1() -> OracleTable {
        make_oracle(1, &[w("1"), w("0")]).unwrap()
    }

    fn cycle4() -> OracleTable {
        make_oracle(2, &[w("01"), w("10"), w("11"), w("00")]).unwrap()
    }

    #[test]
    fn make_oracle_examples() {
        let f = not1();
        assert_eq!(f.eval(&w("0")).unwrap(), w("1"));
        assert_eq!(f.eval(&w("1")).unwrap(), w("0"));
        let id = make_oracle(1, &[w("0"), w("1")]).unwrap();
        assert_eq!(id, OracleTable::identity(1).unwrap());
        let bad = make_oracle(2, &[w("000"), w("000"), w("000"), w("000")]);
        assert_eq!(bad, Err(Error::WidthMismatch { expected: 2, found: 3 }));
        let short = make_oracle(2, &[w("00")]);
        assert_eq!(short, Err(Error::LengthMismatch { expected: 4, found: 1 }));
    }

    #[test]
    fn iterate_examples() {
        let id = OracleTable::identity(3).unwrap();
        assert_eq!(id.iterate(&w("101"), 7).unwrap(), w("101"));
        assert_eq!(not1().iterate(&w("0"), 3).unwrap(), w("1"));
        assert_eq!(cycle4().iterate(&w("00"), 5).unwrap(), w("01"));
        assert_eq!(cycle4().iterate(&w("0"), 1), Err(Error::WidthMismatch { expected: 2, found: 1 }));
    }

    #[test]
    fn mutate_and_diff_examples() {
        let f = cycle4();
        let x = w("10");
        let same = f.mutate(&x, &f.eval(&x).unwrap()).unwrap();
        assert!(f.diff_set(&same).unwrap().is_empty());

        let id = OracleTable::identity(1).unwrap();
        let g = id.mutate(&w("0"), &w("1")).unwrap();
        assert_eq!(g.values(), &[1, 1]);
        assert_eq!(id.values(), &[0, 1]);

        let g = f.mutate(&x, &w("00")).unwrap();
        let d = f.diff_set(&g).unwrap();
        assert_eq!(d.iter().collect::<Vec<_>>(), vec![x]);

        let d = id.diff_set(&not1()).unwrap();
        assert_eq!(d.len(), 2);
        assert!(f.diff_set(&id).is_err());
    }

    #[test]
    fn enumeration_covers_m2_once() {
        let mut seen = std::collections::HashSet::new();
        for k in 0..256u128 {
            assert!(seen.insert(OracleTable::enumerated(2, k).unwrap()));
        }
        assert_eq!(table_count(2), Some(256));
        assert_eq!(table_count(1), Some(4));
        assert_eq!(table_count(3), Some(1 << 24));
    }

    #[test]
    fn sampling_is_deterministic() {
        let s = SeedSpec::new(99).trial(3);
        assert_eq!(sample_uniform_oracle(4, s).unwrap(), sample_uniform_oracle(4, s).unwrap());
        assert_ne!(sample_uniform_oracle(4, s).unwrap(), sample_uniform_oracle(4, s.trial(4)).unwrap());
    }

    #[test]
    fn distinct_orbit_sampling() {
        let mut rng = SeedSpec::new(5).rng();
        for _ in 0..50 {
            let f = OracleTable::sample_distinct_orbit(4, w("0000"), 16, &mut rng).unwrap();
            let orbit = f.orbit(&w("0000"), 16).unwrap();
            let distinct: std::collections::HashSet<_> = orbit.iter().collect();
            assert_eq!(distinct.len(), 16);
        }
        assert!(OracleTable::sample_distinct_orbit(2, w("00"), 5, &mut rng).is_err());
    }
}
