//! Hybrid-argument machinery: single-query and single-mutation gap checks,
//! the adversarial hard-oracle construction, and orbit query-mass matrices.

mod adversary;
mod gap;
mod mass_matrix;

pub use self::adversary::{
    adversary_alpha, adversary_bound_report, build_hard_oracle, AdversaryBounds, AdversaryStep, AdversaryTrace,
    BoundReport,
};
pub use self::gap::{lemma1_check, lemma2_check, lemma2_check_on, GapReport, L2_DIAMETER, VIOLATION_TOL};
pub use self::mass_matrix::{
    pigeonhole_mutation_check, pigeonhole_mutation_check_on, query_mass_matrix, query_mass_matrix_on, MassMatrix,
    PigeonholeReport,
};
