use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::stats::RateEstimate;
use crate::analysis::{GapReport, VIOLATION_TOL};
use crate::error::{Error, Result};

/// First line of every CSV report.
pub const CSV_SCHEMA: &str = "# qqlab-report v1 columns=trial,context,lhs,rhs,slack,vacuous,seed,outcome";

/// Outcome of one trial, for the kinds that have one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Outcome {
    Success { probability: f64 },
    Failure { probability: f64 },
    Succeeded,
    Exhausted { step: usize },
}

impl Outcome {
    pub fn is_success(&self) -> bool {
        matches!(self, Outcome::Success { .. } | Outcome::Succeeded)
    }

    fn label(&self) -> String {
        match self {
            Outcome::Success { probability } => format!("success p={probability}"),
            Outcome::Failure { probability } => format!("failure p={probability}"),
            Outcome::Succeeded => "succeeded".into(),
            Outcome::Exhausted { step } => format!("exhausted@{step}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub rows: Vec<GapReport>,
    pub outcome: Option<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    pub mean_slack: Option<f64>,
    pub min_slack: Option<f64>,
    pub violation_count: usize,
    pub vacuous_count: usize,
    pub success: Option<RateEstimate>,
    /// Exhaustion step → number of trials (adversary runs).
    pub exhaustion_histogram: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialRecord>,
    pub summary: Summary,
    /// Seconds; left out of the report files so they stay reproducible.
    #[serde(skip)]
    pub wall_time: f64,
}

impl ExperimentReport {
    pub fn new(config: ExperimentConfig, trials: Vec<TrialRecord>, wall_time: f64) -> Self {
        let summary = summarize(&trials);
        ExperimentReport { config, trials, summary, wall_time }
    }

    pub fn rows(&self) -> impl Iterator<Item = (&TrialRecord, &GapReport)> {
        self.trials.iter().flat_map(|t| t.rows.iter().map(move |r| (t, r)))
    }

    pub fn has_violation(&self) -> bool {
        self.summary.violation_count > 0
    }

    /// Flat CSV: one line per inequality instance, plus one line per trial
    /// whose only content is its outcome.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["trial", "context", "lhs", "rhs", "slack", "vacuous", "seed", "outcome"]).map_err(io)?;
        for t in &self.trials {
            let outcome = t.outcome.as_ref().map(Outcome::label).unwrap_or_default();
            for r in &t.rows {
                w.write_record([
                    t.trial.to_string(),
                    r.context.clone(),
                    r.lhs.to_string(),
                    r.rhs.to_string(),
                    r.slack.to_string(),
                    r.vacuous.to_string(),
                    t.seed.to_string(),
                    outcome.clone(),
                ])
                .map_err(io)?;
            }
            if t.rows.is_empty() {
                w.write_record([t.trial.to_string(), String::new(), String::new(), String::new(), String::new(), String::new(), t.seed.to_string(), outcome])
                    .map_err(io)?;
            }
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).expect("csv is utf-8");
        Ok(format!("{CSV_SCHEMA}\n{body}"))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Write the files named in the config.
    pub fn write_files(&self) -> Result<()> {
        if let Some(p) = &self.config.output_path {
            write(p, &self.to_csv()?)?;
        }
        if let Some(p) = &self.config.json_path {
            write(p, &self.to_json())?;
        }
        Ok(())
    }
}

pub(crate) fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn summarize(trials: &[TrialRecord]) -> Summary {
    let rows: Vec<&GapReport> = trials.iter().flat_map(|t| &t.rows).collect();
    let slacks: Vec<f64> = rows.iter().map(|r| r.slack).collect();
    let outcomes: Vec<&Outcome> = trials.iter().filter_map(|t| t.outcome.as_ref()).collect();
    let mut exhaustion_histogram = BTreeMap::new();
    for o in &outcomes {
        if let Outcome::Exhausted { step } = o {
            *exhaustion_histogram.entry(*step).or_insert(0) += 1;
        }
    }
    Summary {
        rows: rows.len(),
        mean_slack: (!slacks.is_empty()).then(|| slacks.iter().sum::<f64>() / slacks.len() as f64),
        min_slack: slacks.iter().copied().reduce(f64::min),
        violation_count: rows.iter().filter(|r| r.slack < -VIOLATION_TOL).count(),
        vacuous_count: rows.iter().filter(|r| r.vacuous).count(),
        success: (!outcomes.is_empty())
            .then(|| RateEstimate::new(outcomes.iter().filter(|o| o.is_success()).count(), outcomes.len())),
        exhaustion_histogram,
    }
}
