//! Simulation and analysis of quantum query computations over
//! length-preserving black-box functions on n-bit words.
//!
//! The core is generic over the amplitude scalar ([`Scalar`], implemented for
//! `f32` and `f64`); the aliases below fix it to `f64`.

pub mod analysis;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod qprogram;
pub mod qsim;
pub mod rng;
pub mod scalar;

pub use crate::error::{Error, Result};
pub use crate::oracle::{BitWord, OracleTable, WordSet};
pub use crate::qprogram::ProgramFamily;
pub use crate::qsim::{QubitLayout, QueryState};
pub use crate::rng::SeedSpec;
pub use crate::scalar::Scalar;

pub type State = qsim::StateVector<f64>;
pub type BasisState = qsim::BasisState<f64>;
pub type Gate = qsim::LocalUnitary<f64>;
pub type Program = qprogram::QueryProgram<f64>;
pub type StateTrace = qprogram::Trace<State>;
pub type HardOracleTrace = analysis::AdversaryTrace<State>;

pub type State32 = qsim::StateVector<f32>;
pub type Program32 = qprogram::QueryProgram<f32>;
