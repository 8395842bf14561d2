use std::path::Path;
use std::process::{Command, Output};

use qqlab_core::harness::CSV_SCHEMA;

fn qqlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qqlab")).args(args).output().expect("qqlab runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn lemma1_writes_one_row_per_trial() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = qqlab(&["lemma1", "--n", "3", "--trials", "1000", "--seed", "42", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_SCHEMA));
    assert_eq!(lines.next(), Some("trial,context,lhs,rhs,slack,vacuous,seed,outcome"));
    assert_eq!(lines.count(), 1000);
    assert!(stdout(&o).contains("violations 0"));
}

#[test]
fn iterate_prints_the_iterate() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.txt");
    std::fs::write(&f, "n=2\n00 01\n01 10\n10 11\n11 00\n").unwrap();
    let o = qqlab(&["iterate", "--oracle", path(&f), "--x", "00", "--k", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "01\n");
    let o = qqlab(&["iterate", "--oracle", path(&f), "--x", "000", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn census_reports_failing_fraction() {
    let o = qqlab(&["census", "--family", "classical-emulation", "--n", "2", "--T", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "failingFraction 0"), "{}", stdout(&o));
    let o = qqlab(&["census", "--family", "classical-emulation", "--n", "3", "--T", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn census_files() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, json) = (dir.path().join("c.csv"), dir.path().join("c.json"));
    let o = qqlab(&["census", "--family", "truncated-emulation", "--n", "2", "--T", "3", "--out", path(&csv), "--json", path(&json)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 2 + 256);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["successes"], 136);
    assert_eq!(v["totalOracles"], 256);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qqlab(&["grover"]).status.code(), Some(2));
    assert_eq!(qqlab(&["lemma1", "--bogus"]).status.code(), Some(2));
    assert_eq!(qqlab(&["lemma1", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(qqlab(&["lemma1", "--threshold", "1.5"]).status.code(), Some(2));
    assert_eq!(qqlab(&["adversary", "--family", "classical-emulation"]).status.code(), Some(2));
    assert_eq!(qqlab(&["montecarlo", "--family", "grover"]).status.code(), Some(2));
    assert_eq!(qqlab(&["--help"]).status.code(), Some(0));
}

/// Exit 1 exactly when some CSV row has slack below -1e-9.
#[test]
fn exit_status_tracks_violations() {
    let dir = tempfile::tempdir().unwrap();
    for (i, args) in [
        vec!["adversary", "--n", "4", "--T", "3", "--trials", "4"],
        vec!["adversary", "--n", "3", "--T", "2", "--trials", "4", "--family", "uniform-mass"],
        vec!["lemma2", "--n", "2", "--t", "2", "--tau-work", "2", "--trials", "20"],
        vec!["pigeonhole", "--n", "4", "--t", "1", "--trials", "10", "--distinct-orbit"],
    ]
    .into_iter()
    .enumerate()
    {
        let out = dir.path().join(format!("{i}.csv"));
        let mut a = args.clone();
        a.extend(["--out", path(&out)]);
        let code = qqlab(&a).status.code().unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        let violated = text.lines().skip(2).any(|l| {
            let slack = l.split(',').nth(4).unwrap();
            !slack.is_empty() && slack.parse::<f64>().unwrap() < -1e-9
        });
        assert_eq!(code, i32::from(violated), "{args:?}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"kind": "montecarlo", "n": 2, "T": 3, "trials": 50, "seed": 4}"#).unwrap();
    let o = qqlab(&["montecarlo", "--config", path(&cfg), "--trials", "60"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("trials 60"), "{}", stdout(&o));
    let o = qqlab(&["lemma1", "--config", path(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn info_reads_program_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    let prog = qqlab_core::qprogram::classical_emulation_program::<f64>(2, 3).unwrap();
    std::fs::write(&p, qqlab_core::qprogram::write_program(&prog)).unwrap();
    let o = qqlab(&["info", "--program", path(&p)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("program work 8 n 2 qubits 12 queries 3 monomial true"), "{}", stdout(&o));
}
