use num_complex::Complex;

use super::layout::QubitLayout;
use super::unitary::LocalUnitary;
use super::QueryState;
use crate::error::{Error, Result};
use crate::oracle::{BitWord, OracleTable};
use crate::scalar::{cone, Scalar};

/// A state of the form `phase · e_j`.
///
/// Exact for programs built only from monomial gates (permutations with
/// phases), at layouts far beyond the dense cap. Applying a non-monomial gate
/// is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisState<F: Scalar> {
    layout: QubitLayout,
    index: u64,
    phase: Complex<F>,
}

impl<F: Scalar> BasisState<F> {
    pub fn new(layout: QubitLayout, index: u64) -> Self {
        BasisState { layout, index, phase: cone() }
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn phase(&self) -> Complex<F> {
        self.phase
    }
}

impl<F: Scalar> QueryState<F> for BasisState<F> {
    fn basis(layout: QubitLayout, index: u64) -> Result<Self> {
        Ok(BasisState::new(layout, index))
    }

    fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    fn apply_unitary_mut(&mut self, u: &LocalUnitary<F>) -> Result<()> {
        let mono = u.monomial().ok_or(Error::NotMonomial)?;
        let bits = u.check_layout(&self.layout)?;
        let k = bits.len();
        let local = bits.iter().fold(0usize, |acc, &b| (acc << 1) | ((self.index >> b) & 1) as usize);
        let (row, m) = mono[local];
        let mut index = self.index;
        for (j, &b) in bits.iter().enumerate() {
            let bit = ((row >> (k - 1 - j)) & 1) as u64;
            index = (index & !(1 << b)) | (bit << b);
        }
        self.index = index;
        self.phase = self.phase * m;
        Ok(())
    }

    fn apply_query_mut(&mut self, f: &OracleTable) -> Result<()> {
        let n = self.layout.query_width();
        if f.width() != n {
            return Err(Error::WidthMismatch { expected: n, found: f.width() });
        }
        self.index ^= f.lookup(self.layout.address_of(self.index)) << n;
        Ok(())
    }

    fn norm_sqr(&self) -> F {
        self.phase.norm_sqr()
    }

    fn query_mass(&self, a: &BitWord) -> Result<F> {
        self.layout.check_word(a)?;
        Ok(if self.layout.address_of(self.index) == a.value() { self.phase.norm_sqr() } else { F::zero() })
    }

    fn address_masses(&self) -> Vec<F> {
        let mut masses = vec![F::zero(); 1 << self.layout.query_width()];
        masses[self.layout.address_of(self.index) as usize] = self.phase.norm_sqr();
        masses
    }

    fn l2_distance(&self, other: &Self) -> Result<F> {
        self.layout.check_same(&other.layout)?;
        Ok(if self.index == other.index {
            (self.phase - other.phase).norm()
        } else {
            (self.phase.norm_sqr() + other.phase.norm_sqr()).sqrt()
        })
    }

    fn difference_query_mass(&self, other: &Self, a: &BitWord) -> Result<F> {
        self.layout.check_same(&other.layout)?;
        self.layout.check_word(a)?;
        let hit = |idx: u64| self.layout.address_of(idx) == a.value();
        Ok(if self.index == other.index {
            if hit(self.index) { (self.phase - other.phase).norm_sqr() } else { F::zero() }
        } else {
            let mut m = F::zero();
            if hit(self.index) {
                m += self.phase.norm_sqr();
            }
            if hit(other.index) {
                m += other.phase.norm_sqr();
            }
            m
        })
    }

    fn region_probability(&self, positions: &[usize], target: u64) -> Result<F> {
        let value = self.layout.read_positions(self.index, positions)?;
        Ok(if value == target { self.phase.norm_sqr() } else { F::zero() })
    }
}
