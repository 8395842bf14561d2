//! Program generators.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::QueryProgram;
use crate::error::{Error, Result};
use crate::qsim::{qubit_cap, LocalUnitary, QubitLayout};
use crate::rng::{stream, SeedSpec};
use crate::scalar::Scalar;

/// Reversible classical chain `x → f(x) → … → f^{T}(x)` using exactly `T`
/// queries, under the dense qubit cap.
///
/// Working registers `r_0..r_T` of `n` qubits each, `r_0` holding the input.
/// Round `i` loads `r_i` into the address half, queries, copies the answer
/// half into `r_{i+1}`, clears the answer half with `r_{i+1}` and the
/// address half with `r_i`. Output is `r_T`. Every gate is a CNOT, so each
/// `χ_i` is a basic state whose address half holds `f^{i}(x)`.
pub fn classical_emulation_program<F: Scalar>(n: usize, queries: usize) -> Result<QueryProgram<F>> {
    classical_emulation_program_with_cap(n, queries, qubit_cap())
}

pub fn classical_emulation_program_with_cap<F: Scalar>(n: usize, queries: usize, cap: usize) -> Result<QueryProgram<F>> {
    if queries == 0 {
        return Err(Error::InvalidParameters("classical emulation needs T >= 1".into()));
    }
    emulation(n, queries, cap)
}

/// The best `T-1`-query emulation of a `T`-step chain: the classical
/// emulation with `T-1` rounds, whose output register holds `f^{T-1}(x)`.
/// It computes `f^{T}(x)` exactly when `f^{T-1}(x)` is a fixed point of `f`.
pub fn truncated_emulation_program<F: Scalar>(n: usize, steps: usize, cap: usize) -> Result<QueryProgram<F>> {
    if steps == 0 {
        return Err(Error::InvalidParameters("truncated emulation needs T >= 1".into()));
    }
    emulation(n, steps - 1, cap)
}

fn emulation<F: Scalar>(n: usize, queries: usize, cap: usize) -> Result<QueryProgram<F>> {
    let tau = n
        .checked_mul(queries + 1)
        .ok_or_else(|| Error::InvalidParameters("register count overflows".into()))?;
    let layout = QubitLayout::with_cap(tau, n, cap)?;
    let reg = |j: usize, k: usize| j * n + k;
    let addr = |k: usize| tau + k;
    let ans = |k: usize| tau + n + k;
    let copy = |from: &dyn Fn(usize) -> usize, to: &dyn Fn(usize) -> usize| -> Result<Vec<LocalUnitary<F>>> {
        (1..=n).map(|k| LocalUnitary::cnot(from(k), to(k))).collect()
    };

    let prelude = if queries > 0 { copy(&|k| reg(0, k), &addr)? } else { Vec::new() };
    let mut rounds = Vec::with_capacity(queries);
    for i in 0..queries {
        let mut u = copy(&ans, &|k| reg(i + 1, k))?;
        u.extend(copy(&|k| reg(i + 1, k), &ans)?);
        u.extend(copy(&|k| reg(i, k), &addr)?);
        if i + 1 < queries {
            u.extend(copy(&|k| reg(i + 1, k), &addr)?);
        }
        rounds.push(u);
    }
    let output = (1..=n).map(|k| reg(queries, k)).collect();
    QueryProgram::new(layout, prelude, rounds, output)
}

/// Random program: the prelude and every round get 1 to 4 Haar-random one-
/// or two-qubit gates on random targets. Output region is working qubits
/// `1..=n` when the working register is wide enough, else the answer half.
pub fn random_program<F: Scalar>(n: usize, work: usize, queries: usize, seed: SeedSpec) -> Result<QueryProgram<F>> {
    let layout = QubitLayout::new(work, n)?;
    let mut rng = seed.with_stream(stream::PROGRAM).rng();
    let total = layout.total();
    let block = |rng: &mut rand_chacha::ChaCha20Rng| -> Result<Vec<LocalUnitary<F>>> {
        let count = rng.random_range(1..=4);
        (0..count)
            .map(|_| {
                let arity = if total >= 2 && rng.random_bool(0.5) { 2 } else { 1 };
                let first = rng.random_range(1..=total);
                let mut targets = vec![first];
                if arity == 2 {
                    let mut second = rng.random_range(1..total);
                    if second >= first {
                        second += 1;
                    }
                    targets.push(second);
                }
                LocalUnitary::haar(targets, rng)
            })
            .collect()
    };
    let prelude = block(&mut rng)?;
    let rounds = (0..queries).map(|_| block(&mut rng)).collect::<Result<Vec<_>>>()?;
    let output = if work >= n { (1..=n).collect() } else { layout.answer_positions().collect() };
    QueryProgram::new(layout, prelude, rounds, output)
}

/// `t` rounds with no gates on a bare query register: every query addresses
/// `0̄` with mass 1.
pub fn fixed_word_program<F: Scalar>(n: usize, queries: usize) -> Result<QueryProgram<F>> {
    let layout = QubitLayout::new(0, n)?;
    let output = layout.address_positions().collect();
    QueryProgram::new(layout, Vec::new(), vec![Vec::new(); queries], output)
}

/// Hadamards on the address half, then `t` gate-free rounds: every query has
/// mass `2^-n` on each word.
pub fn uniform_mass_program<F: Scalar>(n: usize, queries: usize) -> Result<QueryProgram<F>> {
    let layout = QubitLayout::new(0, n)?;
    let prelude = layout.address_positions().map(LocalUnitary::h).collect();
    let output = layout.address_positions().collect();
    QueryProgram::new(layout, prelude, vec![Vec::new(); queries], output)
}

/// Named program families, as used by the harness and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProgramFamily {
    ClassicalEmulation,
    TruncatedEmulation,
    Random,
    FixedWord,
    UniformMass,
}

impl ProgramFamily {
    pub const ALL: [ProgramFamily; 5] = [
        ProgramFamily::ClassicalEmulation,
        ProgramFamily::TruncatedEmulation,
        ProgramFamily::Random,
        ProgramFamily::FixedWord,
        ProgramFamily::UniformMass,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ProgramFamily::ClassicalEmulation => "classical-emulation",
            ProgramFamily::TruncatedEmulation => "truncated-emulation",
            ProgramFamily::Random => "random",
            ProgramFamily::FixedWord => "fixed-word",
            ProgramFamily::UniformMass => "uniform-mass",
        }
    }

    /// Number of queries the family uses for a `steps`-step chain.
    pub fn queries_for(&self, steps: usize, t: Option<usize>) -> usize {
        match self {
            ProgramFamily::ClassicalEmulation => steps,
            ProgramFamily::TruncatedEmulation => steps.saturating_sub(1),
            _ => t.unwrap_or(steps.saturating_sub(1)),
        }
    }

    /// Build the family member for `n`-bit words and a `steps`-step chain.
    ///
    /// `t` overrides the query count of the random, fixed-word and
    /// uniform-mass families (default `steps - 1`); `work` is the random
    /// family's working register; `cap` bounds the emulation layouts.
    pub fn build<F: Scalar>(
        &self,
        n: usize,
        steps: usize,
        t: Option<usize>,
        work: usize,
        cap: usize,
        seed: SeedSpec,
    ) -> Result<QueryProgram<F>> {
        let queries = self.queries_for(steps, t);
        match self {
            ProgramFamily::ClassicalEmulation => classical_emulation_program_with_cap(n, steps, cap),
            ProgramFamily::TruncatedEmulation => truncated_emulation_program(n, steps, cap),
            ProgramFamily::Random => random_program(n, work, queries, seed),
            ProgramFamily::FixedWord => fixed_word_program(n, queries),
            ProgramFamily::UniformMass => uniform_mass_program(n, queries),
        }
    }
}

impl fmt::Display for ProgramFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProgramFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProgramFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown program family {s:?}")))
    }
}
