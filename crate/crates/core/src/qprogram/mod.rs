//! Collapsed query programs, traces and program generators.

mod families;
mod format;
mod program;

pub use self::families::{
    classical_emulation_program, classical_emulation_program_with_cap, fixed_word_program, random_program,
    truncated_emulation_program, uniform_mass_program, ProgramFamily,
};
pub use self::format::{parse_program, write_program, PROGRAM_FORMAT};
pub use self::program::{run, success_probability, truncate_after_query, QueryProgram, Trace};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::oracle::{BitWord, OracleTable};
    use crate::qsim::{BasisState, LocalUnitary, QubitLayout, QueryState, StateVector};
    use crate::rng::SeedSpec;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    fn cycle4() -> OracleTable {
        OracleTable::from_values(2, vec![1, 2, 3, 0]).unwrap()
    }

    #[test]
    fn zero_query_program_trace() {
        let l = QubitLayout::new(2, 2).unwrap();
        let p = QueryProgram::<f64>::new(l, vec![], vec![], vec![1, 2]).unwrap();
        let tr = p.run(&cycle4(), &w("10")).unwrap();
        assert_eq!(tr.query_count(), 0);
        let expect = p.initial_index(&w("10")).unwrap();
        assert_eq!(tr.states()[0], StateVector::from_index(l, expect));
        assert_eq!(p.success_probability(&cycle4(), &w("10"), &w("10")).unwrap(), 1.0);
    }

    #[test]
    fn single_round_writes_answer() {
        // |a, 0⟩ with a loaded by X gates in the prelude, one identity round
        let l = QubitLayout::new(0, 2).unwrap();
        let prelude = vec![LocalUnitary::x(1)];
        let p = QueryProgram::<f64>::new(l, prelude, vec![vec![]], vec![3, 4]).unwrap();
        let f = cycle4();
        let tr = p.run(&f, &w("00")).unwrap();
        // a = 10, f(a) = 11
        assert_eq!(p.success_probability(&f, &w("00"), &w("11")).unwrap(), 1.0);
        assert_eq!(tr.final_state().query_mass(&w("10")).unwrap(), 1.0);
    }

    #[test]
    fn emulation_examples() {
        let p = classical_emulation_program::<f64>(2, 3).unwrap();
        assert_eq!(p.query_count(), 3);
        assert!(p.is_monomial());
        let f = cycle4();
        assert_eq!(f.iterate(&w("00"), 3).unwrap(), w("11"));
        assert_eq!(p.success_probability(&f, &w("00"), &w("11")).unwrap(), 1.0);

        let id = OracleTable::identity(3).unwrap();
        let p = classical_emulation_program::<f64>(3, 2).unwrap();
        assert_eq!(p.success_probability(&id, &w("101"), &w("101")).unwrap(), 1.0);

        assert!(matches!(classical_emulation_program::<f64>(4, 5), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn truncation_examples() {
        let p = classical_emulation_program::<f64>(2, 3).unwrap();
        assert_eq!(p.truncate_after_query(3).unwrap(), p);
        let z = p.truncate_after_query(0).unwrap();
        assert_eq!(z.query_count(), 0);
        assert_eq!(z.prelude(), p.prelude());
        assert_eq!(p.truncate_after_query(2).unwrap().query_count(), 2);
        assert!(matches!(p.truncate_after_query(4), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn truncated_family_hits_fixed_points_exactly() {
        // enumerate M_2: the T-1 query emulation succeeds iff f^{2}(00) = f^{3}(00)
        let p = truncated_emulation_program::<f64>(2, 3, 24).unwrap();
        assert_eq!(p.query_count(), 2);
        let zero = w("00");
        for k in 0..256 {
            let f = OracleTable::enumerated(2, k).unwrap();
            let target = f.iterate(&zero, 3).unwrap();
            let expect = if f.iterate(&zero, 2).unwrap() == target { 1.0 } else { 0.0 };
            assert_eq!(p.success_probability(&f, &zero, &target).unwrap(), expect);
        }
        // the literal truncation keeps reading r_T, which stays zero
        let lit = classical_emulation_program::<f64>(2, 3).unwrap().truncate_after_query(2).unwrap();
        for k in 0..256 {
            let f = OracleTable::enumerated(2, k).unwrap();
            let target = f.iterate(&zero, 3).unwrap();
            let expect = if target == zero { 1.0 } else { 0.0 };
            assert_eq!(lit.success_probability(&f, &zero, &target).unwrap(), expect);
        }
    }

    #[test]
    fn random_program_examples() {
        let p = random_program::<f64>(2, 3, 0, SeedSpec::new(1)).unwrap();
        assert_eq!(p.query_count(), 0);
        let a = random_program::<f64>(2, 3, 4, SeedSpec::new(2)).unwrap();
        let b = random_program::<f64>(2, 3, 4, SeedSpec::new(2)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_program::<f64>(2, 3, 4, SeedSpec::new(3)).unwrap());
        for r in a.rounds() {
            assert!((1..=4).contains(&r.len()));
            for g in r {
                // re-admission re-checks unitarity
                LocalUnitary::new(g.targets().to_vec(), g.matrix().to_vec()).unwrap();
            }
        }
        assert!(matches!(random_program::<f64>(10, 10, 1, SeedSpec::new(0)), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn basis_backend_agrees_with_dense_on_emulation() {
        let p = classical_emulation_program::<f64>(2, 3).unwrap();
        let mut rng = SeedSpec::new(12).rng();
        for _ in 0..20 {
            let f = OracleTable::sample(2, &mut rng).unwrap();
            let dense = p.run(&f, &w("01")).unwrap();
            let basis = p.run_on::<BasisState<f64>>(&f, &w("01")).unwrap();
            for (d, b) in dense.states().iter().zip(basis.states()) {
                assert_eq!(d, &StateVector::from_index(*d.layout(), b.index()));
                assert_eq!(d.address_masses(), QueryState::address_masses(b));
            }
        }
    }

    #[test]
    fn basis_backend_rejects_non_monomial_gates() {
        let p = uniform_mass_program::<f64>(2, 1).unwrap();
        let r = p.run_on::<BasisState<f64>>(&OracleTable::identity(2).unwrap(), &w("00"));
        assert_eq!(r.unwrap_err(), Error::NotMonomial);
    }

    #[test]
    fn input_needs_working_register() {
        let p = fixed_word_program::<f64>(2, 1).unwrap();
        assert!(p.run(&cycle4(), &w("00")).is_ok());
        assert!(matches!(p.run(&cycle4(), &w("01")), Err(Error::LayoutMismatch(_))));
    }

    #[test]
    fn program_file_round_trips() {
        for seed in 0..5 {
            let p = random_program::<f64>(2, 2, 3, SeedSpec::new(seed)).unwrap();
            let text = write_program(&p);
            let back = parse_program::<f64>(&text).unwrap();
            assert_eq!(back, p);
            assert_eq!(write_program(&back), text);
        }
        let e = classical_emulation_program::<f64>(1, 2).unwrap();
        assert_eq!(parse_program::<f64>(&write_program(&e)).unwrap(), e);
        assert!(parse_program::<f64>("{}").is_err());
    }

    #[test]
    fn family_names_parse() {
        for f in ProgramFamily::ALL {
            assert_eq!(f.name().parse::<ProgramFamily>().unwrap(), f);
        }
        assert!("grover".parse::<ProgramFamily>().is_err());
    }
}
