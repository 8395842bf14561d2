//! `qqlab`: command-line front end.
//!
//! Exit status 0 on success, 1 when some report row has slack below
//! `-1e-9`, 2 on usage and input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qqlab_core::harness::{exact_census, monte_carlo, CensusReport, ExperimentConfig, ExperimentKind, ExperimentReport};
use qqlab_core::oracle::parse_oracle;
use qqlab_core::qprogram::parse_program;
use qqlab_core::qsim::qubit_cap;
use qqlab_core::{BitWord, Error, ProgramFamily, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// First line of census CSV files.
pub const CENSUS_CSV_SCHEMA: &str = "# qqlab-census v1 columns=oracle,probability,success";

#[derive(Parser, Debug)]
#[command(name = "qqlab", version, about = "Quantum query-complexity laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single-query gap against twice the oracle distance, on random states.
    Lemma1(ExperimentArgs),
    /// Final-state gap of a single-point mutation against the hybrid sum.
    Lemma2(ExperimentArgs),
    /// Hard-oracle construction and its bound chain, for t = T-1 programs.
    Adversary(ExperimentArgs),
    /// Orbit mass matrix and the mutation at its least-queried column.
    Pigeonhole(ExperimentArgs),
    /// Exact success census over every oracle (n <= 2).
    Census(ExperimentArgs),
    /// Success rate over uniformly random oracles.
    Montecarlo(ExperimentArgs),
    /// Print f^k(x) for an oracle file.
    Iterate(IterateArgs),
    /// Print limits, families, and a summary of oracle or program files.
    Info(InfoArgs),
}

#[derive(Args, Debug, Default)]
struct ExperimentArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "tau-work")]
    tau_work: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long = "T")]
    steps: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    family: Option<ProgramFamily>,
    /// CSV report path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long = "allow-large")]
    allow_large: bool,
    #[arg(long = "distinct-orbit")]
    distinct_orbit: bool,
}

#[derive(Args, Debug)]
struct IterateArgs {
    #[arg(long)]
    oracle: PathBuf,
    #[arg(long)]
    x: BitWord,
    #[arg(long)]
    k: u64,
}

#[derive(Args, Debug)]
struct InfoArgs {
    #[arg(long)]
    oracle: Option<PathBuf>,
    #[arg(long)]
    program: Option<PathBuf>,
}

impl ExperimentArgs {
    fn config(&self, kind: ExperimentKind) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => {
                let c = ExperimentConfig::load(p)?;
                if c.kind != kind {
                    return Err(Error::InvalidParameters(format!("config file is for {}, not {kind}", c.kind)));
                }
                c
            }
            None => ExperimentConfig::new(kind),
        };
        macro_rules! set {
            ($($field:ident => $target:ident),*) => {$(
                if let Some(v) = self.$field.clone() {
                    c.$target = v;
                }
            )*};
        }
        set!(n => n, tau_work => tau_work, epsilon => epsilon, trials => trials, seed => seed, threshold => success_threshold);
        if self.t.is_some() {
            c.t = self.t;
        }
        if self.steps.is_some() {
            c.steps = self.steps;
        }
        if self.family.is_some() {
            c.family = self.family;
        }
        if self.out.is_some() {
            c.output_path = self.out.clone();
        }
        if self.json.is_some() {
            c.json_path = self.json.clone();
        }
        c.allow_large |= self.allow_large;
        c.distinct_orbit |= self.distinct_orbit;
        c.validate()?;
        Ok(c)
    }
}

/// Parse `args` (program name first) and run.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("qqlab: {e}");
            EXIT_USAGE
        }
    }
}

fn run(command: Command) -> Result<(String, i32)> {
    let (kind, args) = match command {
        Command::Iterate(a) => return iterate(&a).map(|s| (s, EXIT_OK)),
        Command::Info(a) => return info(&a).map(|s| (s, EXIT_OK)),
        Command::Lemma1(a) => (ExperimentKind::Lemma1, a),
        Command::Lemma2(a) => (ExperimentKind::Lemma2, a),
        Command::Adversary(a) => (ExperimentKind::Adversary, a),
        Command::Pigeonhole(a) => (ExperimentKind::Pigeonhole, a),
        Command::Census(a) => (ExperimentKind::Census, a),
        Command::Montecarlo(a) => (ExperimentKind::Montecarlo, a),
    };
    let config = args.config(kind)?;
    let work = || -> Result<(String, i32)> {
        if kind == ExperimentKind::Census {
            let report = exact_census(&config)?;
            write_census(&config, &report)?;
            Ok((census_summary(&report), EXIT_OK))
        } else {
            let report = monte_carlo(&config)?;
            eprintln!("wall time {:.3}s", report.wall_time);
            let code = if report.has_violation() { EXIT_VIOLATION } else { EXIT_OK };
            Ok((experiment_summary(&report), code))
        }
    };
    match args.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::InvalidParameters(e.to_string()))?
            .install(work),
        None => work(),
    }
}

fn experiment_summary(r: &ExperimentReport) -> String {
    let c = &r.config;
    let s = &r.summary;
    let mut out = String::new();
    let _ = writeln!(out, "kind {} family {} n {} t {} T {} trials {} seed {}", c.kind, c.family(), c.n, c.queries(), c.steps(), c.trials, c.seed);
    let _ = writeln!(out, "rows {}", s.rows);
    let _ = writeln!(out, "violations {}", s.violation_count);
    let _ = writeln!(out, "vacuous {}", s.vacuous_count);
    if let (Some(min), Some(mean)) = (s.min_slack, s.mean_slack) {
        let _ = writeln!(out, "minSlack {min}");
        let _ = writeln!(out, "meanSlack {mean}");
    }
    if let Some(rate) = &s.success {
        let _ = writeln!(out, "successRate {} ({}/{}) wilson95 [{}, {}]", rate.rate, rate.successes, rate.trials, rate.lower, rate.upper);
    }
    for (step, count) in &s.exhaustion_histogram {
        let _ = writeln!(out, "exhaustedAt {step} {count}");
    }
    out
}

fn census_summary(r: &CensusReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "family {} n {} t {} T {}", r.family, r.n, r.t, r.steps);
    let _ = writeln!(out, "totalOracles {}", r.total_oracles);
    let _ = writeln!(out, "successes {}", r.successes);
    let _ = writeln!(out, "failingFraction {}", r.failing_fraction);
    let _ = writeln!(out, "meanProbability {}", r.mean_probability);
    let _ = writeln!(out, "histogram {:?}", r.histogram);
    out
}

fn write_census(config: &ExperimentConfig, r: &CensusReport) -> Result<()> {
    let io = |p: &PathBuf, e: std::io::Error| Error::Io(format!("{}: {e}", p.display()));
    if let Some(p) = &config.output_path {
        let mut text = format!("{CENSUS_CSV_SCHEMA}\noracle,probability,success\n");
        if let Some(probs) = &r.per_oracle {
            for (k, p) in probs.iter().enumerate() {
                let _ = writeln!(text, "{k},{p},{}", *p >= r.threshold);
            }
        }
        std::fs::write(p, text).map_err(|e| io(p, e))?;
    }
    if let Some(p) = &config.json_path {
        let mut text = serde_json::to_string_pretty(r).expect("census serializes");
        text.push('\n');
        std::fs::write(p, text).map_err(|e| io(p, e))?;
    }
    Ok(())
}

fn iterate(a: &IterateArgs) -> Result<String> {
    let f = parse_oracle(&std::fs::read_to_string(&a.oracle)?)?;
    Ok(format!("{}\n", f.iterate(&a.x, a.k)?))
}

fn info(a: &InfoArgs) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "qqlab {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "qubitCap {}", qubit_cap());
    let families: Vec<&str> = ProgramFamily::ALL.iter().map(ProgramFamily::name).collect();
    let _ = writeln!(out, "families {}", families.join(" "));
    let kinds: Vec<&str> = ExperimentKind::ALL.iter().map(ExperimentKind::name).collect();
    let _ = writeln!(out, "kinds {}", kinds.join(" "));
    if let Some(p) = &a.oracle {
        let f = parse_oracle(&std::fs::read_to_string(p)?)?;
        let _ = writeln!(out, "oracle n {}", f.width());
    }
    if let Some(p) = &a.program {
        let prog = parse_program::<f64>(&std::fs::read_to_string(p)?)?;
        let l = prog.layout();
        let _ = writeln!(
            out,
            "program work {} n {} qubits {} queries {} monomial {}",
            l.work(),
            l.query_width(),
            l.total(),
            prog.query_count(),
            prog.is_monomial()
        );
    }
    Ok(out)
}
