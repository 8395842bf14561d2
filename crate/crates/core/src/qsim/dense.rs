use std::fmt::Write as _;

use num_complex::Complex;
use rand::Rng;

use super::layout::{BasisAssignment, QubitLayout};
use super::unitary::LocalUnitary;
use super::QueryState;
use crate::error::{Error, Result};
use crate::oracle::{BitWord, OracleTable};
use crate::rng::{stream, SeedSpec};
use crate::scalar::{cone, czero, Scalar};

/// Dense amplitude vector over all `2^(τ+2n)` basic states.
///
/// Indexing follows [`QubitLayout`]. Values are never normalized implicitly:
/// differences of states are valid `StateVector`s with no norm invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<F: Scalar> {
    layout: QubitLayout,
    amps: Vec<Complex<F>>,
}

impl<F: Scalar> StateVector<F> {
    pub fn basis_state(layout: QubitLayout, assignment: &BasisAssignment) -> Result<Self> {
        let index = assignment.to_index(&layout)?;
        Ok(Self::from_index(layout, index))
    }

    /// `e_0`, all qubits zero.
    pub fn zero_state(layout: QubitLayout) -> Self {
        Self::from_index(layout, 0)
    }

    pub fn from_index(layout: QubitLayout, index: u64) -> Self {
        let mut amps = vec![czero(); layout.dim()];
        amps[index as usize] = cone();
        StateVector { layout, amps }
    }

    pub fn from_amplitudes(layout: QubitLayout, amps: Vec<Complex<F>>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::LengthMismatch { expected: layout.dim(), found: amps.len() });
        }
        Ok(StateVector { layout, amps })
    }

    /// Normalized state with independent complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(layout: QubitLayout, rng: &mut R) -> Self {
        let mut amps: Vec<Complex<F>> = (0..layout.dim())
            .map(|_| {
                let re: f64 = rng.sample(rand_distr::StandardNormal);
                let im: f64 = rng.sample(rand_distr::StandardNormal);
                Complex::new(F::of(re), F::of(im))
            })
            .collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<F>().sqrt();
        for z in amps.iter_mut() {
            *z = *z / norm;
        }
        StateVector { layout, amps }
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex<F>] {
        &self.amps
    }

    pub fn amplitude(&self, index: u64) -> Complex<F> {
        self.amps[index as usize]
    }

    pub fn norm(&self) -> F {
        self.norm_sqr_sum().sqrt()
    }

    fn norm_sqr_sum(&self) -> F {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `W_{G,U}(self)`.
    pub fn apply_local_unitary(&self, u: &LocalUnitary<F>) -> Result<Self> {
        let mut out = self.clone();
        out.apply_local_unitary_mut(u)?;
        Ok(out)
    }

    pub fn apply_local_unitary_mut(&mut self, u: &LocalUnitary<F>) -> Result<()> {
        u.apply_dense(&mut self.amps, &self.layout)
    }

    /// `Qu_f(self)`: `|ā, b̄⟩ ↦ |ā, f(ā) ⊕ b̄⟩` on the query register.
    pub fn apply_query(&self, f: &OracleTable) -> Result<Self> {
        let mut out = self.clone();
        out.apply_query_mut(f)?;
        Ok(out)
    }

    pub fn apply_query_mut(&mut self, f: &OracleTable) -> Result<()> {
        self.check_oracle(f)?;
        let n = self.layout.query_width();
        let mask = self.layout.address_mask();
        for idx in 0..self.amps.len() {
            let partner = idx ^ ((f.lookup(idx as u64 & mask) as usize) << n);
            if partner > idx {
                self.amps.swap(idx, partner);
            }
        }
        Ok(())
    }

    /// `δ_a(self)`: squared mass on basic states whose address half is `a`.
    pub fn query_mass(&self, a: &BitWord) -> Result<F> {
        self.layout.check_word(a)?;
        let n = self.layout.query_width();
        let blocks = self.amps.len() >> n;
        Ok((0..blocks).map(|hi| self.amps[(hi << n) | a.index()].norm_sqr()).sum())
    }

    /// `δ_a(self)` for every address `a`, indexed by the address value.
    pub fn address_masses(&self) -> Vec<F> {
        let mask = self.layout.address_mask() as usize;
        let mut masses = vec![F::zero(); mask + 1];
        for (idx, z) in self.amps.iter().enumerate() {
            masses[idx & mask] += z.norm_sqr();
        }
        masses
    }

    /// `d_S(f, g)`, the root of the query mass on the words where `f` and `g` differ.
    pub fn oracle_distance(&self, f: &OracleTable, g: &OracleTable) -> Result<F> {
        self.check_oracle(f)?;
        self.check_oracle(g)?;
        let diff = f.diff_set(g)?;
        let masses = self.address_masses();
        Ok(diff.iter().map(|a| masses[a.index()]).sum::<F>().sqrt())
    }

    pub fn l2_distance(&self, other: &Self) -> Result<F> {
        self.layout.check_same(&other.layout)?;
        Ok(self.amps.iter().zip(other.amps.iter()).map(|(a, b)| (a - b).norm_sqr()).sum::<F>().sqrt())
    }

    /// Entrywise `self − other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.layout.check_same(&other.layout)?;
        let amps = self.amps.iter().zip(other.amps.iter()).map(|(a, b)| a - b).collect();
        Ok(StateVector { layout: self.layout, amps })
    }

    /// Sample a basic state with probability `|λ_j|²`. The state is not
    /// modified.
    pub fn observe(&self, seed: SeedSpec) -> Result<BasisAssignment> {
        let total = self.norm_sqr_sum().as_f64();
        if (total.sqrt() - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalized { norm: total.sqrt() });
        }
        let mut rng = seed.with_stream(stream::OBSERVE).rng();
        let r: f64 = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut last = 0;
        for (idx, z) in self.amps.iter().enumerate() {
            let p = z.norm_sqr().as_f64();
            if p > 0.0 {
                last = idx;
                acc += p;
                if r < acc {
                    return Ok(BasisAssignment::from_index(&self.layout, idx as u64));
                }
            }
        }
        Ok(BasisAssignment::from_index(&self.layout, last as u64))
    }

    /// Text dump, one `index re im` line per amplitude, 17 significant digits.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (idx, z) in self.amps.iter().enumerate() {
            writeln!(out, "{idx} {:.16e} {:.16e}", z.re.as_f64(), z.im.as_f64()).unwrap();
        }
        out
    }

    /// Inverse of [`StateVector::dump`].
    pub fn parse_dump(layout: QubitLayout, text: &str) -> Result<Self> {
        let mut amps = vec![czero(); layout.dim()];
        for (lineno, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let err = || Error::Parse { line: lineno + 1, message: format!("bad amplitude line {line:?}") };
            let mut parts = line.split_whitespace();
            let idx: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(err)?;
            let re: f64 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(err)?;
            let im: f64 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(err)?;
            *amps.get_mut(idx).ok_or_else(err)? = Complex::new(F::of(re), F::of(im));
        }
        Ok(StateVector { layout, amps })
    }

    fn check_oracle(&self, f: &OracleTable) -> Result<()> {
        if f.width() != self.layout.query_width() {
            return Err(Error::WidthMismatch { expected: self.layout.query_width(), found: f.width() });
        }
        Ok(())
    }
}

impl<F: Scalar> QueryState<F> for StateVector<F> {
    fn basis(layout: QubitLayout, index: u64) -> Result<Self> {
        if layout.total() > super::qubit_cap() {
            return Err(Error::CapExceeded { required: layout.total(), cap: super::qubit_cap(), unit: "qubit count" });
        }
        Ok(Self::from_index(layout, index))
    }

    fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    fn apply_unitary_mut(&mut self, u: &LocalUnitary<F>) -> Result<()> {
        self.apply_local_unitary_mut(u)
    }

    fn apply_query_mut(&mut self, f: &OracleTable) -> Result<()> {
        StateVector::apply_query_mut(self, f)
    }

    fn norm_sqr(&self) -> F {
        self.norm_sqr_sum()
    }

    fn query_mass(&self, a: &BitWord) -> Result<F> {
        StateVector::query_mass(self, a)
    }

    fn address_masses(&self) -> Vec<F> {
        StateVector::address_masses(self)
    }

    fn l2_distance(&self, other: &Self) -> Result<F> {
        StateVector::l2_distance(self, other)
    }

    fn difference_query_mass(&self, other: &Self, a: &BitWord) -> Result<F> {
        self.layout.check_same(&other.layout)?;
        self.layout.check_word(a)?;
        let n = self.layout.query_width();
        let blocks = self.amps.len() >> n;
        Ok((0..blocks)
            .map(|hi| {
                let idx = (hi << n) | a.index();
                (self.amps[idx] - other.amps[idx]).norm_sqr()
            })
            .sum())
    }

    fn region_probability(&self, positions: &[usize], target: u64) -> Result<F> {
        let bits: Vec<usize> = positions.iter().map(|&p| self.layout.bit_of(p)).collect::<Result<_>>()?;
        let read = |idx: usize| bits.iter().fold(0u64, |acc, &b| (acc << 1) | ((idx >> b) & 1) as u64);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| read(*idx) == target)
            .map(|(_, z)| z.norm_sqr())
            .sum())
    }
}
