use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind};
use super::report::{ExperimentReport, Outcome, TrialRecord};
use crate::analysis::{
    adversary_bound_report, build_hard_oracle, lemma1_check, lemma2_check_on, pigeonhole_mutation_check_on, GapReport,
};
use crate::error::{Error, Result};
use crate::oracle::{sample_uniform_oracle, BitWord, OracleTable};
use crate::qprogram::{ProgramFamily, QueryProgram};
use crate::qsim::{qubit_cap, BasisState, QubitLayout, QueryState, StateVector, BASIS_QUBIT_CAP};
use crate::rng::{stream, SeedSpec};

type Program = QueryProgram<f64>;

/// Build the configured family member. Emulation families are admitted up
/// to the basis-tracking cap since they only contain CNOTs.
pub fn build_program(config: &ExperimentConfig, seed: SeedSpec) -> Result<Program> {
    let family = config.family();
    let cap = match family {
        ProgramFamily::ClassicalEmulation | ProgramFamily::TruncatedEmulation => BASIS_QUBIT_CAP,
        _ => qubit_cap(),
    };
    family.build(config.n, config.steps(), Some(config.queries()), config.tau_work, cap, seed)
}

/// Run `config.trials` independent trials of `config.kind` and write the
/// report files named in the config.
///
/// Trial `i` draws everything from `SeedSpec::new(seed).trial(i)`; trials
/// run in parallel and are assembled in index order.
pub fn monte_carlo(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    if config.kind == ExperimentKind::Census {
        return Err(Error::InvalidParameters("census runs go through exact_census".into()));
    }
    let start = Instant::now();
    let master = SeedSpec::new(config.seed);
    // Monte Carlo over oracles keeps one program for every trial
    let shared = match config.kind {
        ExperimentKind::Montecarlo => Some(build_program(config, master)?),
        _ => None,
    };
    let trials = (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(config, shared.as_ref(), i))
        .collect::<Result<Vec<_>>>()?;
    let report = ExperimentReport::new(config.clone(), trials, start.elapsed().as_secs_f64());
    report.write_files()?;
    Ok(report)
}

/// Fraction of hard-oracle constructions that succeed, with the exhaustion
/// histogram in the summary.
pub fn adversary_success_rate(
    family: ProgramFamily,
    n: usize,
    steps: usize,
    epsilon: f64,
    trials: usize,
    seed: u64,
    work: usize,
) -> Result<ExperimentReport> {
    let mut config = ExperimentConfig::new(ExperimentKind::Adversary);
    config.family = Some(family);
    config.n = n;
    config.steps = Some(steps);
    config.epsilon = epsilon;
    config.trials = trials;
    config.seed = seed;
    config.tau_work = work;
    monte_carlo(&config)
}

fn run_trial(config: &ExperimentConfig, shared: Option<&Program>, i: usize) -> Result<TrialRecord> {
    let seed = SeedSpec::new(config.seed).trial(i as u64);
    let (rows, outcome) = match config.kind {
        ExperimentKind::Lemma1 => (vec![lemma1_trial(config, seed)?], None),
        ExperimentKind::Lemma2 => (vec![lemma2_trial(config, seed)?], None),
        ExperimentKind::Adversary => adversary_trial(config, seed)?,
        ExperimentKind::Pigeonhole => (pigeonhole_trial(config, seed)?, None),
        ExperimentKind::Montecarlo => (Vec::new(), Some(success_trial(config, shared.expect("shared program"), seed)?)),
        ExperimentKind::Census => unreachable!("rejected by monte_carlo"),
    };
    Ok(TrialRecord { trial: i, seed: config.seed, rows, outcome })
}

fn random_word<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitWord {
    BitWord::new(rng.random_range(0..1u64 << n), n).expect("value fits")
}

/// A second oracle at a random distance from `f`: equal, one changed point,
/// a random number of changed points, or independent.
pub fn perturbed_oracle(f: &OracleTable, seed: SeedSpec) -> Result<OracleTable> {
    let n = f.width();
    let mut rng = seed.with_stream(stream::MUTATION).rng();
    match rng.random_range(0..4) {
        0 => Ok(f.clone()),
        1 => f.mutate(&random_word(n, &mut rng), &random_word(n, &mut rng)),
        2 => {
            let mut g = f.clone();
            for _ in 0..rng.random_range(1..=1usize << n) {
                g = g.mutate(&random_word(n, &mut rng), &random_word(n, &mut rng))?;
            }
            Ok(g)
        }
        _ => OracleTable::sample(n, &mut rng),
    }
}

fn lemma1_trial(config: &ExperimentConfig, seed: SeedSpec) -> Result<GapReport> {
    let layout = QubitLayout::new(config.tau_work, config.n)?;
    let state = StateVector::<f64>::random(layout, &mut seed.with_stream(stream::STATE).rng());
    let f = sample_uniform_oracle(config.n, seed)?;
    let g = perturbed_oracle(&f, seed)?;
    lemma1_check(&state, &f, &g)
}

fn lemma2_trial(config: &ExperimentConfig, seed: SeedSpec) -> Result<GapReport> {
    let prog = build_program(config, seed)?;
    let n = config.n;
    let f = sample_uniform_oracle(n, seed)?;
    let mut rng = seed.with_stream(stream::MUTATION).rng();
    let (a, y) = (random_word(n, &mut rng), random_word(n, &mut rng));
    let zero = BitWord::zero(n)?;
    if prog.is_monomial() {
        lemma2_check_on::<f64, BasisState<f64>>(&prog, &f, &a, &y, &zero)
    } else {
        lemma2_check_on::<f64, StateVector<f64>>(&prog, &f, &a, &y, &zero)
    }
}

fn adversary_trial(config: &ExperimentConfig, seed: SeedSpec) -> Result<(Vec<GapReport>, Option<Outcome>)> {
    let prog = build_program(config, seed)?;
    if prog.is_monomial() {
        adversary_on::<BasisState<f64>>(&prog, config, seed)
    } else {
        adversary_on::<StateVector<f64>>(&prog, config, seed)
    }
}

fn adversary_on<S: QueryState<f64>>(
    prog: &Program,
    config: &ExperimentConfig,
    seed: SeedSpec,
) -> Result<(Vec<GapReport>, Option<Outcome>)> {
    let steps = config.steps();
    let trace = build_hard_oracle::<f64, S>(prog, steps, config.epsilon, seed)?;
    if !trace.succeeded {
        let step = trace.exhausted_at.expect("failed traces record the exhaustion step");
        return Ok((Vec::new(), Some(Outcome::Exhausted { step })));
    }
    let report = adversary_bound_report(prog, &trace, steps, config.epsilon)?;
    Ok((report.checks, Some(Outcome::Succeeded)))
}

fn pigeonhole_trial(config: &ExperimentConfig, seed: SeedSpec) -> Result<Vec<GapReport>> {
    let prog = build_program(config, seed)?;
    let n = config.n;
    let steps = config.steps();
    let zero = BitWord::zero(n)?;
    let f = if config.distinct_orbit {
        OracleTable::sample_distinct_orbit(n, zero, steps, &mut seed.with_stream(stream::ORACLE).rng())?
    } else {
        sample_uniform_oracle(n, seed)?
    };
    let report = if prog.is_monomial() {
        pigeonhole_mutation_check_on::<f64, BasisState<f64>>(&prog, &f, steps, &zero, seed)?
    } else {
        pigeonhole_mutation_check_on::<f64, StateVector<f64>>(&prog, &f, steps, &zero, seed)?
    };
    Ok(report.checks())
}

fn success_trial(config: &ExperimentConfig, prog: &Program, seed: SeedSpec) -> Result<Outcome> {
    let n = config.n;
    let f = sample_uniform_oracle(n, seed)?;
    let zero = BitWord::zero(n)?;
    let target = f.iterate(&zero, config.steps() as u64)?;
    let probability = if prog.is_monomial() {
        prog.success_probability_on::<BasisState<f64>>(&f, &zero, &target)?
    } else {
        prog.success_probability_on::<StateVector<f64>>(&f, &zero, &target)?
    };
    Ok(if probability >= config.success_threshold {
        Outcome::Success { probability }
    } else {
        Outcome::Failure { probability }
    })
}
