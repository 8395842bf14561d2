//! Query mass on the classical orbit, and the single-point mutation at its
//! least-queried word.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gap::{GapReport, VIOLATION_TOL};
use crate::error::{Error, Result};
use crate::oracle::{BitWord, OracleTable};
use crate::qprogram::QueryProgram;
use crate::qsim::{QueryState, StateVector};
use crate::rng::{stream, SeedSpec};
use crate::scalar::Scalar;

/// `a[i][j] = δ_{f^j(x)}(χ_i)` for the `t` pre-query states `i = 0..t` and
/// orbit indices `j = 0..T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassMatrix {
    pub entries: Vec<Vec<f64>>,
    /// Orbit words `f^j(x)`, `j = 0..T`.
    pub orbit: Vec<BitWord>,
    /// `Σ_j a[i][j]`, counting repeated orbit words once per index.
    pub row_sums: Vec<f64>,
    /// Mass of row `i` on the distinct orbit words.
    pub distinct_row_sums: Vec<f64>,
    pub col_sums: Vec<f64>,
}

impl MassMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.orbit.len()
    }

    /// Every distinct-word row sum is at most 1.
    pub fn row_bound_holds(&self) -> bool {
        self.distinct_row_sums.iter().all(|&s| s <= 1.0 + VIOLATION_TOL)
    }

    /// Every per-index row sum is at most 1, the hypothesis of the averaging step.
    pub fn raw_rows_bounded(&self) -> bool {
        self.row_sums.iter().all(|&s| s <= 1.0 + VIOLATION_TOL)
    }

    /// Smallest column index among those of minimal column sum.
    pub fn min_column(&self) -> (usize, f64) {
        self.col_sums
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |best, (j, s)| if s < best.1 { (j, s) } else { best })
    }

    pub fn orbit_is_distinct(&self) -> bool {
        self.orbit.iter().collect::<HashSet<_>>().len() == self.orbit.len()
    }
}

pub fn query_mass_matrix<F: Scalar>(
    prog: &QueryProgram<F>,
    f: &OracleTable,
    steps: usize,
    input: &BitWord,
) -> Result<MassMatrix> {
    query_mass_matrix_on::<F, StateVector<F>>(prog, f, steps, input)
}

pub fn query_mass_matrix_on<F: Scalar, S: QueryState<F>>(
    prog: &QueryProgram<F>,
    f: &OracleTable,
    steps: usize,
    input: &BitWord,
) -> Result<MassMatrix> {
    if steps == 0 {
        return Err(Error::InvalidParameters("orbit length T must be positive".into()));
    }
    let orbit = f.orbit(input, steps)?;
    let t = prog.query_count();
    let mut entries = Vec::with_capacity(t);
    let mut distinct_row_sums = Vec::with_capacity(t);
    let distinct: Vec<BitWord> = {
        let mut seen = HashSet::new();
        orbit.iter().copied().filter(|w| seen.insert(*w)).collect()
    };
    prog.visit(f, input, |i, s: &S| {
        if i < t {
            let masses = s.address_masses();
            entries.push(orbit.iter().map(|w| masses[w.index()].as_f64()).collect::<Vec<_>>());
            distinct_row_sums.push(distinct.iter().map(|w| masses[w.index()].as_f64()).sum());
        }
        Ok(())
    })?;
    let row_sums = entries.iter().map(|r| r.iter().sum()).collect();
    let col_sums = (0..steps).map(|j| entries.iter().map(|r| r[j]).sum()).collect();
    Ok(MassMatrix { entries, orbit, row_sums, distinct_row_sums, col_sums })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PigeonholeReport {
    /// lhs: final-state gap under `f` and the mutated `g`; rhs: the Lemma 2
    /// sum `2 Σ_i sqrt(a[i][j*])`, which never exceeds the Cauchy form.
    pub gap: GapReport,
    pub column: usize,
    pub column_sum: f64,
    /// `t / T`.
    pub average_bound: f64,
    /// `2 Σ_i sqrt(a[i][j*])`.
    pub hybrid_sum: f64,
    /// `2 sqrt(t · colSum(j*))`.
    pub cauchy_bound: f64,
    /// `2 t / sqrt(T)`.
    pub sqrt_bound: f64,
    pub mutated_word: BitWord,
    pub new_value: BitWord,
    /// `g^{T}(x) ≠ f^{T}(x)`.
    pub answer_changed: bool,
    /// Distinct-word row sums, `i = 0..t`.
    pub row_sums: Vec<f64>,
    pub raw_rows_bounded: bool,
    pub row_bound_holds: bool,
}

impl PigeonholeReport {
    /// Every inequality in the chain, as separate instances.
    pub fn checks(&self) -> Vec<GapReport> {
        let mut out: Vec<GapReport> =
            self.row_sums.iter().enumerate().map(|(i, &s)| GapReport::new(format!("rowsum[{i}]"), s, 1.0)).collect();
        out.extend([
            self.gap.clone(),
            GapReport::new("cauchy", self.hybrid_sum, self.cauchy_bound),
            GapReport::distance_bound("gap-vs-cauchy", self.gap.lhs, self.cauchy_bound),
        ]);
        if self.raw_rows_bounded {
            out.push(GapReport::new("pigeonhole", self.column_sum, self.average_bound));
            out.push(GapReport::distance_bound("sqrt-bound", self.cauchy_bound, self.sqrt_bound));
        }
        out
    }
}

/// Mutate `f` at the least-queried orbit word `f^{j*}(x)` to a fresh uniform
/// value and compare the final states.
pub fn pigeonhole_mutation_check<F: Scalar>(
    prog: &QueryProgram<F>,
    f: &OracleTable,
    steps: usize,
    input: &BitWord,
    seed: SeedSpec,
) -> Result<PigeonholeReport> {
    pigeonhole_mutation_check_on::<F, StateVector<F>>(prog, f, steps, input, seed)
}

pub fn pigeonhole_mutation_check_on<F: Scalar, S: QueryState<F>>(
    prog: &QueryProgram<F>,
    f: &OracleTable,
    steps: usize,
    input: &BitWord,
    seed: SeedSpec,
) -> Result<PigeonholeReport> {
    let matrix = query_mass_matrix_on::<F, S>(prog, f, steps, input)?;
    let t = prog.query_count() as f64;
    let (column, column_sum) = matrix.min_column();
    let word = matrix.orbit[column];

    let n = f.width();
    let current = f.lookup(word.value());
    let mut rng = seed.with_stream(stream::MUTATION).rng();
    let mut value = rng.random_range(0..(1u64 << n) - 1);
    if value >= current {
        value += 1;
    }
    let new_value = BitWord::new(value, n)?;
    let g = f.mutate(&word, &new_value)?;

    let under_f: S = prog.final_state_on(f, input)?;
    let under_g: S = prog.final_state_on(&g, input)?;
    let lhs = under_f.l2_distance(&under_g)?.as_f64();
    let hybrid_sum = 2.0 * matrix.entries.iter().map(|r| r[column].sqrt()).sum::<f64>();
    let cauchy_bound = 2.0 * (t * column_sum).sqrt();
    let answer_changed = g.iterate(input, steps as u64)? != f.iterate(input, steps as u64)?;

    Ok(PigeonholeReport {
        gap: GapReport::distance_bound("pigeonhole-gap", lhs, hybrid_sum.min(cauchy_bound)),
        column,
        column_sum,
        average_bound: t / steps as f64,
        hybrid_sum,
        cauchy_bound,
        sqrt_bound: 2.0 * t / (steps as f64).sqrt(),
        mutated_word: word,
        new_value,
        answer_changed,
        raw_rows_bounded: matrix.raw_rows_bounded(),
        row_sums: matrix.distinct_row_sums.clone(),
        row_bound_holds: matrix.row_bound_holds(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qprogram::{classical_emulation_program, fixed_word_program};

    fn cycle4() -> OracleTable {
        OracleTable::from_values(2, vec![1, 2, 3, 0]).unwrap()
    }

    #[test]
    fn emulation_matrix_is_diagonal() {
        let p = classical_emulation_program::<f64>(2, 3).unwrap();
        let zero = BitWord::zero(2).unwrap();
        let m = query_mass_matrix(&p, &cycle4(), 3, &zero).unwrap();
        assert_eq!(m.rows(), 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.entries[i][j], if i == j { 1.0 } else { 0.0 });
            }
        }
        assert_eq!(m.col_sums, vec![1.0, 1.0, 1.0]);
        assert!(m.row_bound_holds());

        let r = pigeonhole_mutation_check(&p, &cycle4(), 3, &zero, SeedSpec::new(1)).unwrap();
        assert_eq!(r.column, 0);
        assert_eq!(r.column_sum, 1.0);
        assert_eq!(r.average_bound, 1.0);
        assert!(r.checks().iter().all(GapReport::passes));
    }

    #[test]
    fn fixed_point_orbit_repeats_columns() {
        // 00 is a fixed point, and the fixed-word program queries it every round
        let p = fixed_word_program::<f64>(2, 2).unwrap();
        let f = OracleTable::from_values(2, vec![0, 2, 3, 1]).unwrap();
        let m = query_mass_matrix(&p, &f, 3, &BitWord::zero(2).unwrap()).unwrap();
        assert_eq!(m.col_sums, vec![2.0, 2.0, 2.0]);
        assert_eq!(m.row_sums, vec![3.0, 3.0]);
        assert_eq!(m.distinct_row_sums, vec![1.0, 1.0]);
        assert!(m.row_bound_holds());
        assert!(!m.raw_rows_bounded());
        assert!(!m.orbit_is_distinct());
    }

    #[test]
    fn zero_column_means_zero_gap() {
        let p = fixed_word_program::<f64>(3, 2).unwrap();
        let f = OracleTable::from_values(3, vec![1, 2, 3, 4, 5, 6, 7, 0]).unwrap();
        let zero = BitWord::zero(3).unwrap();
        let r = pigeonhole_mutation_check(&p, &f, 4, &zero, SeedSpec::new(4)).unwrap();
        assert_eq!(r.column, 1);
        assert_eq!(r.column_sum, 0.0);
        assert!(r.gap.lhs <= 1e-9);
        assert!(r.answer_changed);
    }
}
