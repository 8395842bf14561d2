use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::experiments::build_program;
use crate::error::{Error, Result};
use crate::oracle::{table_count, BitWord, OracleTable};
use crate::qprogram::{ProgramFamily, QueryProgram};
use crate::qsim::{BasisState, QueryState, StateVector};

/// Largest `n` enumerated without `allow_large`.
pub const CENSUS_DEFAULT_MAX_N: usize = 2;
/// Largest `n` enumerated at all (`2^24` oracles).
pub const CENSUS_HARD_MAX_N: usize = 3;
/// Probability histogram resolution.
pub const HISTOGRAM_BINS: usize = 10;

const BLOCK: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CensusReport {
    pub family: ProgramFamily,
    pub n: usize,
    pub t: usize,
    #[serde(rename = "T")]
    pub steps: usize,
    pub threshold: f64,
    pub total_oracles: u128,
    /// Success probability of every oracle in enumeration order (`n ≤ 2`).
    pub per_oracle: Option<Vec<f64>>,
    /// Counts of success probabilities in `[k/10, (k+1)/10)`, the last bin
    /// closed.
    pub histogram: Vec<u64>,
    pub successes: u64,
    pub failing: u64,
    pub failing_fraction: f64,
    pub mean_probability: f64,
    pub min_probability: f64,
}

/// Enumerate every `f ∈ M_n` and compute the success probability of the
/// configured family against `f^{T}(0̄)` from input `0̄`.
pub fn exact_census(config: &ExperimentConfig) -> Result<CensusReport> {
    config.validate()?;
    let prog = build_program(config, crate::rng::SeedSpec::new(config.seed))?;
    census_of_program(&prog, config.family(), config.steps(), config.success_threshold, config.allow_large)
}

pub fn census_of_program(
    prog: &QueryProgram<f64>,
    family: ProgramFamily,
    steps: usize,
    threshold: f64,
    allow_large: bool,
) -> Result<CensusReport> {
    let n = prog.layout().query_width();
    let limit = if allow_large { CENSUS_HARD_MAX_N } else { CENSUS_DEFAULT_MAX_N };
    if n > limit {
        return Err(Error::CapExceeded { required: n, cap: limit, unit: "census word width" });
    }
    let total = table_count(n).expect("n <= 3 has a finite table count");
    if prog.is_monomial() {
        census_on::<BasisState<f64>>(prog, family, n, steps, threshold, total)
    } else {
        census_on::<StateVector<f64>>(prog, family, n, steps, threshold, total)
    }
}

fn bin(p: f64) -> usize {
    ((p * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1)
}

struct Block {
    probabilities: Option<Vec<f64>>,
    histogram: Vec<u64>,
    successes: u64,
    sum: f64,
    min: f64,
}

fn census_on<S: QueryState<f64>>(
    prog: &QueryProgram<f64>,
    family: ProgramFamily,
    n: usize,
    steps: usize,
    threshold: f64,
    total: u128,
) -> Result<CensusReport> {
    let zero = BitWord::zero(n)?;
    let keep = n <= CENSUS_DEFAULT_MAX_N;
    let total64 = total as u64;
    let blocks: Vec<Block> = (0..total64.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| -> Result<Block> {
            let range = b * BLOCK..((b + 1) * BLOCK).min(total64);
            let mut blk = Block {
                probabilities: keep.then(Vec::new),
                histogram: vec![0; HISTOGRAM_BINS],
                successes: 0,
                sum: 0.0,
                min: f64::INFINITY,
            };
            for k in range {
                let f = OracleTable::enumerated(n, k as u128)?;
                let target = f.iterate(&zero, steps as u64)?;
                let p = prog.success_probability_on::<S>(&f, &zero, &target)?.clamp(0.0, 1.0);
                if let Some(v) = blk.probabilities.as_mut() {
                    v.push(p);
                }
                blk.histogram[bin(p)] += 1;
                blk.successes += u64::from(p >= threshold);
                blk.sum += p;
                blk.min = blk.min.min(p);
            }
            Ok(blk)
        })
        .collect::<Result<_>>()?;

    let mut histogram = vec![0; HISTOGRAM_BINS];
    let mut per_oracle = keep.then(Vec::new);
    let (mut successes, mut sum, mut min) = (0, 0.0, f64::INFINITY);
    for blk in blocks {
        for (h, c) in histogram.iter_mut().zip(&blk.histogram) {
            *h += c;
        }
        if let (Some(all), Some(p)) = (per_oracle.as_mut(), blk.probabilities) {
            all.extend(p);
        }
        successes += blk.successes;
        sum += blk.sum;
        min = min.min(blk.min);
    }
    let failing = total64 - successes;
    Ok(CensusReport {
        family,
        n,
        t: prog.query_count(),
        steps,
        threshold,
        total_oracles: total,
        per_oracle,
        histogram,
        successes,
        failing,
        failing_fraction: failing as f64 / total as f64,
        mean_probability: sum / total as f64,
        min_probability: min,
    })
}
