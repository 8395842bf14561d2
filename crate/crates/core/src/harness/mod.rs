//! Experiment front door: exact censuses over all oracles at tiny `n`,
//! seeded Monte Carlo sweeps and their reports.
//!
//! Every experiment runs against the shipped program families (or a program
//! file); rates measured here say nothing about programs outside them.

mod census;
mod config;
mod experiments;
mod report;
mod stats;

pub use self::census::{
    census_of_program, exact_census, CensusReport, CENSUS_DEFAULT_MAX_N, CENSUS_HARD_MAX_N, HISTOGRAM_BINS,
};
pub use self::config::{ExperimentConfig, ExperimentKind, DEFAULT_SUCCESS_THRESHOLD};
pub use self::experiments::{adversary_success_rate, build_program, monte_carlo, perturbed_oracle};
pub use self::report::{ExperimentReport, Outcome, Summary, TrialRecord, CSV_SCHEMA};
pub use self::stats::{wilson_interval, RateEstimate, Z95};
