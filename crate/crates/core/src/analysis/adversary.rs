//! Adversarial hard-oracle construction for `t = T-1` query programs, and
//! the measured hybrid chain that bounds how much the final answer can
//! depend on the last pivot.
//!
//! The construction keeps lists `ζ_i = ⟨ξ_i, f_i, 𝒯_i, x_i⟩`:
//!
//! * `ξ_0 = χ_0`, `f_0` uniform, `x_0 = 0̄`, `𝒯_0 = {0,1}^n`;
//! * `ξ_{i+1} = V_{i,f_i}(ξ_i)`;
//! * `𝒯_{i+1} = 𝒯_i ∩ {a : δ_a(ξ_{i+1}) < T^-α}`, `α = 5 + ε/2`;
//! * `x_{i+1}` uniform on `𝒯_{i+1}`, and `f_{i+1}` is `f_i` with
//!   `f_{i+1}(x_i) = x_{i+1}`.
//!
//! After the last program round the construction takes one more step with no
//! unitary (`ξ_{t+1} = Qu_{f_t}(ξ_t)`) to pick `x_{t+1}` and form
//! `f_T = f_t` with `f_T(x_t) = x_{t+1}`, the oracle whose `T`-th iterate the
//! `T-1` query program should be unable to tell apart from `f_t`'s.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gap::{GapReport, VIOLATION_TOL};
use crate::error::{Error, Result};
use crate::oracle::{BitWord, OracleTable, WordSet};
use crate::qprogram::QueryProgram;
use crate::qsim::QueryState;
use crate::rng::{stream, SeedSpec};
use crate::scalar::Scalar;

/// `α = 5 + ε/2`.
pub fn adversary_alpha(epsilon: f64) -> f64 {
    5.0 + epsilon / 2.0
}

/// One list `ζ_i`.
#[derive(Debug, Clone)]
pub struct AdversaryStep<S> {
    pub state: S,
    pub oracle: OracleTable,
    pub candidates: WordSet,
    pub pivot: BitWord,
}

#[derive(Debug, Clone)]
pub struct AdversaryTrace<S> {
    /// `ζ_0, …` up to `ζ_t` on success, or up to the last completed step.
    pub steps: Vec<AdversaryStep<S>>,
    pub alpha: f64,
    pub steps_total: usize,
    /// `T^-α`.
    pub threshold: f64,
    pub succeeded: bool,
    /// Index `i+1` of the first empty `𝒯_{i+1}`.
    pub exhausted_at: Option<usize>,
    /// Address masses `δ_a(ξ_{i+1})` that defined each `R_i`.
    pub round_masses: Vec<Vec<f64>>,
    /// `ξ_{t+1} = Qu_{f_t}(ξ_t)`, `𝒯_{t+1}`, `x_{t+1}` and `f_T`.
    pub final_state: Option<S>,
    pub final_candidates: Option<WordSet>,
    pub final_pivot: Option<BitWord>,
    pub final_oracle: Option<OracleTable>,
    /// `δ_{x_t}(ξ_i)` for `i = 0..=t` (success only).
    pub pivot_masses: Vec<f64>,
    /// `max_i δ_{x_t}(ξ_i) < T^-α`.
    pub pivot_invariant_holds: bool,
}

impl<S> AdversaryTrace<S> {
    pub fn last_pivot(&self) -> Option<BitWord> {
        self.succeeded.then(|| self.steps.last().expect("nonempty").pivot)
    }
}

fn shrink(candidates: &WordSet, masses: &[f64], threshold: f64) -> WordSet {
    let mut next = candidates.clone();
    next.retain(|a| masses[a.index()] < threshold);
    next
}

fn draw<R: Rng + ?Sized>(set: &WordSet, rng: &mut R) -> BitWord {
    set.nth(rng.random_range(0..set.len())).expect("index within set")
}

/// Run the construction against `prog`, which must make `T-1` queries.
///
/// Exhaustion (some `𝒯_{i+1} = ∅`) is not an error: the trace comes back with
/// `succeeded = false`.
pub fn build_hard_oracle<F: Scalar, S: QueryState<F>>(
    prog: &QueryProgram<F>,
    steps_total: usize,
    epsilon: f64,
    seed: SeedSpec,
) -> Result<AdversaryTrace<S>> {
    if steps_total == 0 || prog.query_count() + 1 != steps_total {
        return Err(Error::InvalidParameters(format!(
            "adversary needs a T-1 = {} query program, got {}",
            steps_total.saturating_sub(1),
            prog.query_count()
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameters(format!("epsilon must be positive, got {epsilon}")));
    }
    let n = prog.layout().query_width();
    let t = prog.query_count();
    let alpha = adversary_alpha(epsilon);
    let threshold = (steps_total as f64).powf(-alpha);
    let zero = BitWord::zero(n)?;

    let f0 = OracleTable::sample(n, &mut seed.with_stream(stream::ORACLE).rng())?;
    let mut rng = seed.with_stream(stream::ADVERSARY).rng();

    let mut trace = AdversaryTrace {
        steps: vec![AdversaryStep {
            state: prog.initial_state::<S>(&zero)?,
            oracle: f0,
            candidates: WordSet::full(n)?,
            pivot: zero,
        }],
        alpha,
        steps_total,
        threshold,
        succeeded: false,
        exhausted_at: None,
        round_masses: Vec::with_capacity(t + 1),
        final_state: None,
        final_candidates: None,
        final_pivot: None,
        final_oracle: None,
        pivot_masses: Vec::new(),
        pivot_invariant_holds: false,
    };

    for i in 0..t {
        let cur = &trace.steps[i];
        let next_state = prog.round(i, &cur.state, &cur.oracle)?;
        let masses: Vec<f64> = next_state.address_masses().into_iter().map(Scalar::as_f64).collect();
        let candidates = shrink(&cur.candidates, &masses, threshold);
        trace.round_masses.push(masses);
        if candidates.is_empty() {
            trace.exhausted_at = Some(i + 1);
            return Ok(trace);
        }
        let pivot = draw(&candidates, &mut rng);
        let oracle = cur.oracle.mutate(&cur.pivot, &pivot)?;
        trace.steps.push(AdversaryStep { state: next_state, oracle, candidates, pivot });
    }

    // closing step: no unitary after the last query
    let last = &trace.steps[t];
    let mut closing = last.state.clone();
    closing.apply_query_mut(&last.oracle)?;
    let masses: Vec<f64> = closing.address_masses().into_iter().map(Scalar::as_f64).collect();
    let candidates = shrink(&last.candidates, &masses, threshold);
    trace.round_masses.push(masses);
    let current = last.oracle.eval(&last.pivot)?;
    let mut fresh = candidates.clone();
    fresh.remove(&current);
    if fresh.is_empty() {
        trace.exhausted_at = Some(t + 1);
        return Ok(trace);
    }
    let final_pivot = draw(&fresh, &mut rng);
    trace.final_oracle = Some(last.oracle.mutate(&last.pivot, &final_pivot)?);
    trace.final_pivot = Some(final_pivot);
    trace.final_candidates = Some(candidates);
    trace.final_state = Some(closing);

    let x_t = last.pivot;
    trace.pivot_masses = trace
        .steps
        .iter()
        .map(|s| s.state.query_mass(&x_t).map(Scalar::as_f64))
        .collect::<Result<_>>()?;
    trace.pivot_invariant_holds = trace.pivot_masses.iter().all(|&m| m < threshold);
    trace.succeeded = true;
    Ok(trace)
}

/// The four closed-form right-hand sides for `t = T-1`, `α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversaryBounds {
    /// `2 t^{1/2} / T^{α/2}`, caps every `Δ_i`.
    pub delta_cap: f64,
    /// `2 i t^{1/2} / T^{α/2}` for `i = 1..=t`, caps `∂_i`.
    pub partial_caps: Vec<f64>,
    /// `3 t^{3/2} / T^{α/2}`, caps every `đ_x(ξ'_i)`.
    pub pivot_cap: f64,
    /// `6 t^{5/2} / T^{α/2}`, caps the final gap.
    pub final_cap: f64,
}

impl AdversaryBounds {
    pub fn new(steps_total: usize, alpha: f64) -> Self {
        let t = steps_total.saturating_sub(1) as f64;
        let scale = (steps_total as f64).powf(alpha / 2.0);
        AdversaryBounds {
            delta_cap: 2.0 * t.sqrt() / scale,
            partial_caps: (1..=steps_total.saturating_sub(1)).map(|i| 2.0 * i as f64 * t.sqrt() / scale).collect(),
            pivot_cap: 3.0 * t.powf(1.5) / scale,
            final_cap: 6.0 * t.powf(2.5) / scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// `Δ_i = |V_i*(ξ_i) − V_i(ξ_i)|`, `i = 0..t`.
    pub delta_caps: Vec<f64>,
    /// `∂_i = |ξ_i − ξ'_i|`, `i = 1..=t`.
    pub partials: Vec<f64>,
    /// `đ_x(ξ'_i)`, `i = 0..=t`, `x = x_t`.
    pub pivot_masses: Vec<f64>,
    /// `|ξ'_t − ξ''_t|`.
    pub final_gap: f64,
    pub bounds: AdversaryBounds,
    /// Every inequality instance, including the exact identities.
    pub checks: Vec<GapReport>,
}

impl BoundReport {
    pub fn violations(&self) -> impl Iterator<Item = &GapReport> {
        self.checks.iter().filter(|c| !c.passes())
    }

    pub fn all_pass(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Rerun the program under `f_t` (primed chain) and `f_T` (double-primed),
/// measure the hybrid quantities and check them against the closed-form
/// bounds.
pub fn adversary_bound_report<F: Scalar, S: QueryState<F>>(
    prog: &QueryProgram<F>,
    trace: &AdversaryTrace<S>,
    steps_total: usize,
    epsilon: f64,
) -> Result<BoundReport> {
    if !trace.succeeded {
        return Err(Error::TraceNotSucceeded);
    }
    let t = prog.query_count();
    if steps_total != t + 1 || trace.steps.len() != t + 1 {
        return Err(Error::InvalidParameters("trace does not belong to this program".into()));
    }
    let alpha = adversary_alpha(epsilon);
    let bounds = AdversaryBounds::new(steps_total, alpha);
    let zero = BitWord::zero(prog.layout().query_width())?;
    let f_t = &trace.steps[t].oracle;
    let f_big = trace.final_oracle.as_ref().expect("succeeded trace has f_T");
    let x = trace.steps[t].pivot;

    let primed = prog.run_on::<S>(f_t, &zero)?;
    let doubled: S = prog.final_state_on(f_big, &zero)?;
    let primed = primed.states();

    let mut checks = Vec::new();
    let mut delta_caps = Vec::with_capacity(t);
    for i in 0..t {
        let step = &trace.steps[i];
        let with_fi = prog.round(i, &step.state, &step.oracle)?;
        let with_ft = prog.round(i, &step.state, f_t)?;
        let delta = with_fi.l2_distance(&with_ft)?.as_f64();
        checks.push(GapReport::distance_bound(format!("ineq3[{i}]"), delta, bounds.delta_cap));
        delta_caps.push(delta);
    }

    let mut partials = Vec::with_capacity(t);
    let mut pivot_masses = Vec::with_capacity(t + 1);
    let mut running = 0.0;
    for i in 0..=t {
        let xi = &trace.steps[i].state;
        let xi_p = &primed[i];
        let partial = xi.l2_distance(xi_p)?.as_f64();
        checks.push(GapReport::new(format!("prop2[{i}]"), partial, running));
        if i >= 1 {
            checks.push(GapReport::distance_bound(format!("ineq4[{i}]"), partial, bounds.partial_caps[i - 1]));
            partials.push(partial);
        }
        if i < t {
            running += delta_caps[i];
        }

        let pm = xi_p.query_mass(&x)?.as_f64().sqrt();
        let diff = xi.difference_query_mass(xi_p, &x)?.as_f64().sqrt();
        let own = xi.query_mass(&x)?.as_f64().sqrt();
        checks.push(GapReport::new(format!("triangle[{i}]"), pm, diff + own));
        checks.push(GapReport::new(format!("pivot[{i}]"), own * own, trace.threshold));
        checks.push(GapReport::new(format!("ineq5[{i}]"), pm, bounds.pivot_cap));
        pivot_masses.push(pm);
    }

    let final_gap = primed[t].l2_distance(&doubled)?.as_f64();
    let chain: f64 = 2.0 * pivot_masses[..t].iter().sum::<f64>();
    checks.push(GapReport::distance_bound("chain", final_gap, chain));
    checks.push(GapReport::distance_bound("final", final_gap, bounds.final_cap));

    debug_assert!(t == 0 || (partials[0] - delta_caps[0]).abs() <= VIOLATION_TOL);
    Ok(BoundReport { delta_caps, partials, pivot_masses, final_gap, bounds, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qprogram::{fixed_word_program, uniform_mass_program};
    use crate::qsim::StateVector;

    type Dense = StateVector<f64>;

    #[test]
    fn zero_query_trace() {
        let p = fixed_word_program::<f64>(3, 0).unwrap();
        let tr = build_hard_oracle::<f64, Dense>(&p, 1, 1.0, SeedSpec::new(1)).unwrap();
        assert_eq!(tr.threshold, 1.0);
        assert!(tr.succeeded);
        assert_eq!(tr.steps.len(), 1);
        // only 0̄ carries mass, and only it can fall out of 𝒯_1
        assert!(tr.final_candidates.as_ref().unwrap().len() >= 7);
        let rep = adversary_bound_report(&p, &tr, 1, 1.0).unwrap();
        assert!(rep.delta_caps.is_empty());
        assert!(rep.partials.is_empty());
        assert_eq!(rep.final_gap, 0.0);
    }

    #[test]
    fn fixed_word_mass_removes_one_word_per_step() {
        let p = fixed_word_program::<f64>(3, 3).unwrap();
        let tr = build_hard_oracle::<f64, Dense>(&p, 4, 1.0, SeedSpec::new(2)).unwrap();
        assert!(tr.succeeded);
        for s in &tr.steps[1..] {
            assert_eq!(s.candidates.len(), 7);
            assert!(!s.candidates.contains(&BitWord::zero(3).unwrap()));
        }
        assert!(tr.pivot_invariant_holds);
    }

    #[test]
    fn uniform_mass_exhausts_in_one_step() {
        // threshold 2^-5.5 ≈ 0.0221 is below the 0.5 mass on each word
        let p = uniform_mass_program::<f64>(1, 1).unwrap();
        let tr = build_hard_oracle::<f64, Dense>(&p, 2, 1.0, SeedSpec::new(3)).unwrap();
        assert!((tr.threshold - 2f64.powf(-5.5)).abs() < 1e-15);
        assert!(!tr.succeeded);
        assert_eq!(tr.exhausted_at, Some(1));
        assert_eq!(adversary_bound_report(&p, &tr, 2, 1.0).unwrap_err(), Error::TraceNotSucceeded);
    }

    #[test]
    fn construction_invariants() {
        let p = fixed_word_program::<f64>(4, 2).unwrap();
        for s in 0..10 {
            let tr = build_hard_oracle::<f64, Dense>(&p, 3, 1.0, SeedSpec::new(s)).unwrap();
            assert!(tr.succeeded);
            for w in tr.steps.windows(2) {
                assert!(w[1].candidates.is_subset(&w[0].candidates));
                assert!(w[1].candidates.contains(&w[1].pivot));
                let d = w[0].oracle.diff_set(&w[1].oracle).unwrap();
                assert!(d.len() <= 1);
                assert!(d.iter().all(|a| a == w[0].pivot));
            }
            let rep = adversary_bound_report(&p, &tr, 3, 1.0).unwrap();
            assert_eq!(rep.partials[0], rep.delta_caps[0]);
        }
    }

    #[test]
    fn rejects_wrong_regime() {
        let p = fixed_word_program::<f64>(2, 2).unwrap();
        assert!(build_hard_oracle::<f64, Dense>(&p, 2, 1.0, SeedSpec::new(0)).is_err());
        assert!(build_hard_oracle::<f64, Dense>(&p, 3, 0.0, SeedSpec::new(0)).is_err());
    }

    #[test]
    fn bound_formulas() {
        let b = AdversaryBounds::new(4, 5.5);
        let scale = 4f64.powf(2.75);
        assert!((b.delta_cap - 2.0 * 3f64.sqrt() / scale).abs() < 1e-15);
        assert_eq!(b.partial_caps.len(), 3);
        assert!((b.partial_caps[2] - 6.0 * 3f64.sqrt() / scale).abs() < 1e-15);
        assert!((b.pivot_cap - 3.0 * 3f64.powf(1.5) / scale).abs() < 1e-15);
        assert!((b.final_cap - 6.0 * 3f64.powf(2.5) / scale).abs() < 1e-15);
    }
}
