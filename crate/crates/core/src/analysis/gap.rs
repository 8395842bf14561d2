use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{BitWord, OracleTable};
use crate::qprogram::QueryProgram;
use crate::qsim::{QueryState, StateVector};
use crate::scalar::Scalar;

/// Slack below which an inequality instance counts as violated.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Diameter of the unit sphere; a bound above it says nothing about unit vectors.
pub const L2_DIAMETER: f64 = 2.0;

/// Both sides of one inequality instance `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub context: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub vacuous: bool,
}

impl GapReport {
    pub fn new(context: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        // + 0.0 folds -0.0 into 0.0 so reports never print "-0"
        let (lhs, rhs) = (lhs + 0.0, rhs + 0.0);
        GapReport { context: context.into(), lhs, rhs, slack: rhs - lhs + 0.0, vacuous: false }
    }

    /// A distance bound between unit vectors: vacuous once `rhs > 2`.
    pub fn distance_bound(context: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        GapReport { vacuous: rhs > L2_DIAMETER, ..GapReport::new(context, lhs, rhs) }
    }

    pub fn passes(&self) -> bool {
        self.slack >= -VIOLATION_TOL
    }
}

/// `|Qu_f(S) − Qu_g(S)|` against `2 d_S(f, g)`.
pub fn lemma1_check<F: Scalar>(state: &StateVector<F>, f: &OracleTable, g: &OracleTable) -> Result<GapReport> {
    let norm = state.norm().as_f64();
    if (norm - 1.0).abs() > F::NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let lhs = state.apply_query(f)?.l2_distance(&state.apply_query(g)?)?;
    let rhs = F::of(2.0) * state.oracle_distance(f, g)?;
    Ok(GapReport::distance_bound("lemma1", lhs.as_f64(), rhs.as_f64()))
}

/// Final-state deviation caused by changing `f` at the single word `a` to
/// `y`, against `2 Σ_{i<t} sqrt(δ_a(χ_i))` along the `f`-trace.
pub fn lemma2_check<F: Scalar>(
    prog: &QueryProgram<F>,
    f: &OracleTable,
    a: &BitWord,
    y: &BitWord,
    input: &BitWord,
) -> Result<GapReport> {
    lemma2_check_on::<F, StateVector<F>>(prog, f, a, y, input)
}

pub fn lemma2_check_on<F: Scalar, S: QueryState<F>>(
    prog: &QueryProgram<F>,
    f: &OracleTable,
    a: &BitWord,
    y: &BitWord,
    input: &BitWord,
) -> Result<GapReport> {
    let g = f.mutate(a, y)?;
    // g = f differs nowhere: the sum over the difference set is empty
    let changed = f.eval(a)? != *y;
    let t = prog.query_count();
    let mut rhs = F::zero();
    let under_f: S = prog.visit(f, input, |i, s: &S| {
        if changed && i < t {
            rhs += s.query_mass(a)?.sqrt();
        }
        Ok(())
    })?;
    let under_g: S = prog.final_state_on(&g, input)?;
    let lhs = under_f.l2_distance(&under_g)?;
    Ok(GapReport::distance_bound("lemma2", lhs.as_f64(), (F::of(2.0) * rhs).as_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{LocalUnitary, QubitLayout};
    use num_complex::Complex;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn lemma1_examples() {
        let l = QubitLayout::new(0, 1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex::new(0.0, 0.0); 4];
        amps[0] = Complex::new(s, 0.0);
        amps[1] = Complex::new(s, 0.0);
        let psi = StateVector::from_amplitudes(l, amps).unwrap();
        let id = OracleTable::identity(1).unwrap();
        let r = lemma1_check(&psi, &id, &id).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));

        let g = id.mutate(&w("0"), &w("1")).unwrap();
        let r = lemma1_check(&psi, &id, &g).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert!((r.rhs - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.passes());

        let unnorm = StateVector::from_amplitudes(l, vec![Complex::new(1.0, 0.0); 4]).unwrap();
        assert!(lemma1_check(&unnorm, &id, &g).is_err());
    }

    #[test]
    fn lemma2_examples() {
        let l = QubitLayout::new(0, 2).unwrap();
        // address 10 loaded in the prelude, one identity round
        let p = QueryProgram::<f64>::new(l, vec![LocalUnitary::x(1)], vec![vec![]], vec![3, 4]).unwrap();
        let f = OracleTable::from_values(2, vec![1, 2, 3, 0]).unwrap();
        let a = w("10");
        let same = lemma2_check(&p, &f, &a, &f.eval(&a).unwrap(), &w("00")).unwrap();
        assert_eq!((same.lhs, same.rhs), (0.0, 0.0));
        let r = lemma2_check(&p, &f, &a, &w("00"), &w("00")).unwrap();
        assert!((r.lhs - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.rhs, 2.0);

        // a word with no query mass: both sides zero
        let r = lemma2_check(&p, &f, &w("01"), &w("00"), &w("00")).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    }
}
