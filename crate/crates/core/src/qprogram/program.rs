use crate::error::{Error, Result};
use crate::oracle::{BitWord, OracleTable};
use crate::qsim::{LocalUnitary, QubitLayout, QueryState, StateVector};
use crate::scalar::Scalar;

/// A query computation in collapsed form: a prelude unitary, then `t`
/// rounds of `χ_{i+1} = U_i(Qu_f(χ_i))`, then a read of `output_region`.
///
/// The input word is written on working qubits `1..=n` of the initial basic
/// state; every other qubit starts at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryProgram<F: Scalar> {
    layout: QubitLayout,
    prelude: Vec<LocalUnitary<F>>,
    rounds: Vec<Vec<LocalUnitary<F>>>,
    output_region: Vec<usize>,
}

impl<F: Scalar> QueryProgram<F> {
    pub fn new(
        layout: QubitLayout,
        prelude: Vec<LocalUnitary<F>>,
        rounds: Vec<Vec<LocalUnitary<F>>>,
        output_region: Vec<usize>,
    ) -> Result<Self> {
        for gate in prelude.iter().chain(rounds.iter().flatten()) {
            gate.check_layout(&layout)?;
        }
        if output_region.len() != layout.query_width() {
            return Err(Error::WidthMismatch { expected: layout.query_width(), found: output_region.len() });
        }
        for (i, p) in output_region.iter().enumerate() {
            layout.bit_of(*p)?;
            if output_region[..i].contains(p) {
                return Err(Error::DuplicateTarget(*p));
            }
        }
        Ok(QueryProgram { layout, prelude, rounds, output_region })
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    pub fn prelude(&self) -> &[LocalUnitary<F>] {
        &self.prelude
    }

    pub fn rounds(&self) -> &[Vec<LocalUnitary<F>>] {
        &self.rounds
    }

    pub fn output_region(&self) -> &[usize] {
        &self.output_region
    }

    /// Number of oracle evaluations `t`.
    pub fn query_count(&self) -> usize {
        self.rounds.len()
    }

    /// True when every gate is monomial, so [`crate::qsim::BasisState`] runs it exactly.
    pub fn is_monomial(&self) -> bool {
        self.prelude.iter().chain(self.rounds.iter().flatten()).all(LocalUnitary::is_monomial)
    }

    /// Index of the initial basic state for `input`.
    pub fn initial_index(&self, input: &BitWord) -> Result<u64> {
        let n = self.layout.query_width();
        if input.width() != n {
            return Err(Error::WidthMismatch { expected: n, found: input.width() });
        }
        if input.value() == 0 {
            return Ok(0);
        }
        if self.layout.work() < n {
            return Err(Error::LayoutMismatch(format!(
                "input needs {n} working qubits, layout has {}",
                self.layout.work()
            )));
        }
        let mut index = 0u64;
        for k in 1..=n {
            if input.bit(k) {
                index |= 1 << self.layout.bit_of(k)?;
            }
        }
        Ok(index)
    }

    /// `χ_0`: the prelude applied to the initial basic state.
    pub fn initial_state<S: QueryState<F>>(&self, input: &BitWord) -> Result<S> {
        let mut state = S::basis(self.layout, self.initial_index(input)?)?;
        for gate in &self.prelude {
            state.apply_unitary_mut(gate)?;
        }
        Ok(state)
    }

    /// `V_{i,f}(state) = U_i(Qu_f(state))`, in place.
    pub fn round_mut<S: QueryState<F>>(&self, i: usize, state: &mut S, f: &OracleTable) -> Result<()> {
        let round = self.rounds.get(i).ok_or(Error::IndexOutOfRange { index: i, max: self.rounds.len().saturating_sub(1) })?;
        state.apply_query_mut(f)?;
        for gate in round {
            state.apply_unitary_mut(gate)?;
        }
        Ok(())
    }

    pub fn round<S: QueryState<F>>(&self, i: usize, state: &S, f: &OracleTable) -> Result<S> {
        let mut next = state.clone();
        self.round_mut(i, &mut next, f)?;
        Ok(next)
    }

    /// Run the program, handing each `χ_i` to `visit` in order, and return `χ_t`.
    pub fn visit<S: QueryState<F>>(
        &self,
        f: &OracleTable,
        input: &BitWord,
        mut visit: impl FnMut(usize, &S) -> Result<()>,
    ) -> Result<S> {
        self.check_oracle(f)?;
        let mut state: S = self.initial_state(input)?;
        visit(0, &state)?;
        for i in 0..self.rounds.len() {
            self.round_mut(i, &mut state, f)?;
            visit(i + 1, &state)?;
        }
        Ok(state)
    }

    pub fn run_on<S: QueryState<F>>(&self, f: &OracleTable, input: &BitWord) -> Result<Trace<S>> {
        let mut states = Vec::with_capacity(self.rounds.len() + 1);
        self.visit(f, input, |_, s: &S| {
            states.push(s.clone());
            Ok(())
        })?;
        Ok(Trace { states })
    }

    /// Dense trace `χ_0, …, χ_t`.
    pub fn run(&self, f: &OracleTable, input: &BitWord) -> Result<Trace<StateVector<F>>> {
        self.run_on(f, input)
    }

    pub fn final_state_on<S: QueryState<F>>(&self, f: &OracleTable, input: &BitWord) -> Result<S> {
        self.visit(f, input, |_, _: &S| Ok(()))
    }

    /// Exact probability that observing `χ_t` yields `target` in the output region.
    pub fn success_probability_on<S: QueryState<F>>(&self, f: &OracleTable, input: &BitWord, target: &BitWord) -> Result<F> {
        if target.width() != self.output_region.len() {
            return Err(Error::WidthMismatch { expected: self.output_region.len(), found: target.width() });
        }
        let last: S = self.final_state_on(f, input)?;
        last.region_probability(&self.output_region, target.value())
    }

    pub fn success_probability(&self, f: &OracleTable, input: &BitWord, target: &BitWord) -> Result<F> {
        self.success_probability_on::<StateVector<F>>(f, input, target)
    }

    /// Only the first `k` rounds; prelude and output region unchanged.
    pub fn truncate_after_query(&self, k: usize) -> Result<Self> {
        if k > self.rounds.len() {
            return Err(Error::IndexOutOfRange { index: k, max: self.rounds.len() });
        }
        Ok(QueryProgram { rounds: self.rounds[..k].to_vec(), ..self.clone() })
    }

    fn check_oracle(&self, f: &OracleTable) -> Result<()> {
        if f.width() != self.layout.query_width() {
            return Err(Error::WidthMismatch { expected: self.layout.query_width(), found: f.width() });
        }
        Ok(())
    }
}

/// The states `χ_0, …, χ_t` of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace<S> {
    states: Vec<S>,
}

impl<S> Trace<S> {
    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn query_count(&self) -> usize {
        self.states.len() - 1
    }

    pub fn final_state(&self) -> &S {
        self.states.last().expect("trace holds at least χ_0")
    }

    pub fn into_states(self) -> Vec<S> {
        self.states
    }
}

pub fn run<F: Scalar>(prog: &QueryProgram<F>, f: &OracleTable, input: &BitWord) -> Result<Trace<StateVector<F>>> {
    prog.run(f, input)
}

pub fn truncate_after_query<F: Scalar>(prog: &QueryProgram<F>, k: usize) -> Result<QueryProgram<F>> {
    prog.truncate_after_query(k)
}

pub fn success_probability<F: Scalar>(
    prog: &QueryProgram<F>,
    f: &OracleTable,
    input: &BitWord,
    target: &BitWord,
) -> Result<F> {
    prog.success_probability(f, input, target)
}
