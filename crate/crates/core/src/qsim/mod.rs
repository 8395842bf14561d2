//! State-vector simulation of the query machine's quantum part.
//!
//! Two backends implement [`QueryState`]: the dense [`StateVector`], which
//! handles arbitrary gates up to the qubit cap, and [`BasisState`], which
//! tracks a single phased basic state and handles monomial-only programs at
//! any layout up to [`BASIS_QUBIT_CAP`] qubits.

mod basis;
mod dense;
mod layout;
mod unitary;

pub use self::basis::BasisState;
pub use self::dense::StateVector;
pub use self::layout::{qubit_cap, BasisAssignment, QubitLayout, BASIS_QUBIT_CAP, DEFAULT_QUBIT_CAP, QUBIT_CAP_ENV};
pub use self::unitary::{LocalUnitary, MAX_LOCAL_TARGETS, MAX_WIDE_TARGETS};

use crate::error::Result;
use crate::oracle::{BitWord, OracleTable};
use crate::rng::SeedSpec;
use crate::scalar::Scalar;

/// Operations the query-program runner and the analysis layer need from a
/// state representation.
pub trait QueryState<F: Scalar>: Clone + Send + Sync + Sized {
    fn basis(layout: QubitLayout, index: u64) -> Result<Self>;
    fn layout(&self) -> &QubitLayout;
    fn apply_unitary_mut(&mut self, u: &LocalUnitary<F>) -> Result<()>;
    fn apply_query_mut(&mut self, f: &OracleTable) -> Result<()>;
    fn norm_sqr(&self) -> F;
    fn query_mass(&self, a: &BitWord) -> Result<F>;
    /// `δ_a` for every address, indexed by address value.
    fn address_masses(&self) -> Vec<F>;
    fn l2_distance(&self, other: &Self) -> Result<F>;
    /// `δ_a(self − other)`.
    fn difference_query_mass(&self, other: &Self, a: &BitWord) -> Result<F>;
    /// Probability that the qubits at `positions` read `target` (first
    /// position most significant).
    fn region_probability(&self, positions: &[usize], target: u64) -> Result<F>;
}

pub fn basis_state<F: Scalar>(layout: QubitLayout, assignment: &BasisAssignment) -> Result<StateVector<F>> {
    StateVector::basis_state(layout, assignment)
}

pub fn apply_local_unitary<F: Scalar>(state: &StateVector<F>, u: &LocalUnitary<F>) -> Result<StateVector<F>> {
    state.apply_local_unitary(u)
}

pub fn apply_query<F: Scalar>(state: &StateVector<F>, f: &OracleTable) -> Result<StateVector<F>> {
    state.apply_query(f)
}

pub fn query_mass<F: Scalar>(state: &StateVector<F>, a: &BitWord) -> Result<F> {
    state.query_mass(a)
}

pub fn oracle_distance<F: Scalar>(state: &StateVector<F>, f: &OracleTable, g: &OracleTable) -> Result<F> {
    state.oracle_distance(f, g)
}

pub fn l2_distance<F: Scalar>(v1: &StateVector<F>, v2: &StateVector<F>) -> Result<F> {
    v1.l2_distance(v2)
}

pub fn observe<F: Scalar>(state: &StateVector<F>, seed: SeedSpec) -> Result<BasisAssignment> {
    state.observe(seed)
}
