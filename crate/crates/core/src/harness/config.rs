use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::MAX_WORD_WIDTH;
use crate::qprogram::ProgramFamily;

/// Default success threshold `p ≥ 2/3`.
pub const DEFAULT_SUCCESS_THRESHOLD: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Lemma1,
    Lemma2,
    Adversary,
    Pigeonhole,
    Census,
    Montecarlo,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Lemma1,
        ExperimentKind::Lemma2,
        ExperimentKind::Adversary,
        ExperimentKind::Pigeonhole,
        ExperimentKind::Census,
        ExperimentKind::Montecarlo,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Lemma1 => "lemma1",
            ExperimentKind::Lemma2 => "lemma2",
            ExperimentKind::Adversary => "adversary",
            ExperimentKind::Pigeonhole => "pigeonhole",
            ExperimentKind::Census => "census",
            ExperimentKind::Montecarlo => "montecarlo",
        }
    }

    /// Family used when the config does not name one.
    pub fn default_family(&self) -> ProgramFamily {
        match self {
            ExperimentKind::Lemma1 | ExperimentKind::Lemma2 | ExperimentKind::Pigeonhole => ProgramFamily::Random,
            ExperimentKind::Adversary | ExperimentKind::Montecarlo => ProgramFamily::TruncatedEmulation,
            ExperimentKind::Census => ProgramFamily::ClassicalEmulation,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown experiment kind {s:?}")))
    }
}

/// One experiment. Missing fields in a config file take the defaults of
/// [`ExperimentConfig::new`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    /// Working-register width for random programs and random states.
    pub tau_work: usize,
    /// Query count; `None` means the kind's default.
    pub t: Option<usize>,
    /// Chain length `T`; `None` means the kind's default.
    #[serde(rename = "T")]
    pub steps: Option<usize>,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub success_threshold: f64,
    pub family: Option<ProgramFamily>,
    /// Pigeonhole trials: draw `f` conditioned on `f^0(0̄), …, f^{T-1}(0̄)`
    /// being distinct.
    pub distinct_orbit: bool,
    /// Census above `n = 2`.
    pub allow_large: bool,
    pub output_path: Option<PathBuf>,
    pub json_path: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig::new(ExperimentKind::Lemma1)
    }
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            kind,
            n: 2,
            tau_work: 0,
            t: None,
            steps: None,
            epsilon: 1.0,
            trials: 100,
            seed: 0,
            success_threshold: DEFAULT_SUCCESS_THRESHOLD,
            family: None,
            distinct_orbit: false,
            allow_large: false,
            output_path: None,
            json_path: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn family(&self) -> ProgramFamily {
        self.family.unwrap_or_else(|| self.kind.default_family())
    }

    /// `T`, defaulting to `t + 1` for the `t = T-1` kinds and to `4t²` for
    /// pigeonhole runs.
    pub fn steps(&self) -> usize {
        if let Some(s) = self.steps {
            return s;
        }
        match self.kind {
            ExperimentKind::Pigeonhole => 4 * self.t.unwrap_or(1).pow(2),
            ExperimentKind::Census if self.family() == ProgramFamily::ClassicalEmulation => self.t.unwrap_or(2),
            _ => self.t.map_or(2, |t| t + 1),
        }
    }

    /// Query count of the configured program.
    pub fn queries(&self) -> usize {
        match self.kind {
            ExperimentKind::Lemma1 => 0,
            ExperimentKind::Lemma2 => self.t.unwrap_or(2),
            ExperimentKind::Pigeonhole => self.t.unwrap_or(1),
            _ => self.family().queries_for(self.steps(), self.t),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameters(m));
        if self.n == 0 || self.n > MAX_WORD_WIDTH {
            return bad(format!("n must be in 1..={MAX_WORD_WIDTH}, got {}", self.n));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.success_threshold > 0.0 && self.success_threshold <= 1.0) {
            return bad(format!("success threshold must be in (0, 1], got {}", self.success_threshold));
        }
        let steps = self.steps();
        let family = self.family();
        match self.kind {
            ExperimentKind::Lemma1 => {}
            ExperimentKind::Lemma2 => {}
            ExperimentKind::Adversary => {
                if steps < 1 {
                    return bad("adversary needs T >= 1".into());
                }
                if !(self.epsilon > 0.0) {
                    return bad(format!("epsilon must be positive, got {}", self.epsilon));
                }
                if family.queries_for(steps, self.t) + 1 != steps {
                    return bad(format!("adversary needs t = T-1, got t = {} with T = {steps}", self.queries()));
                }
            }
            ExperimentKind::Pigeonhole => {
                if steps == 0 {
                    return bad("pigeonhole needs T >= 1".into());
                }
                if self.distinct_orbit && steps > 1usize << self.n.min(63) {
                    return bad(format!("no distinct orbit of length {steps} on {}-bit words", self.n));
                }
            }
            ExperimentKind::Census | ExperimentKind::Montecarlo => {
                if steps == 0 {
                    return bad("T must be at least 1".into());
                }
                if family == ProgramFamily::ClassicalEmulation && self.t.is_some_and(|t| t != steps) {
                    return bad("classical emulation makes exactly T queries".into());
                }
                if family == ProgramFamily::TruncatedEmulation && self.t.is_some_and(|t| t + 1 != steps) {
                    return bad("truncated emulation makes exactly T-1 queries".into());
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_validation() {
        let c = ExperimentConfig::new(ExperimentKind::Adversary);
        assert_eq!(c.steps(), 2);
        assert_eq!(c.queries(), 1);
        c.validate().unwrap();

        let mut c = ExperimentConfig::new(ExperimentKind::Adversary);
        c.family = Some(ProgramFamily::ClassicalEmulation);
        assert!(c.validate().is_err());

        let mut c = ExperimentConfig::new(ExperimentKind::Lemma1);
        c.trials = 0;
        assert!(c.validate().is_err());
        c.trials = 1;
        c.success_threshold = 0.0;
        assert!(c.validate().is_err());
        c.success_threshold = 1.0;
        c.validate().unwrap();

        let mut c = ExperimentConfig::new(ExperimentKind::Pigeonhole);
        c.t = Some(2);
        assert_eq!(c.steps(), 16);
    }

    #[test]
    fn config_file_fills_defaults() {
        let c = ExperimentConfig::from_json(r#"{"kind": "montecarlo", "n": 3, "T": 4, "trials": 2000, "seed": 9}"#).unwrap();
        assert_eq!(c.kind, ExperimentKind::Montecarlo);
        assert_eq!(c.steps(), 4);
        assert_eq!(c.queries(), 3);
        assert_eq!(c.success_threshold, DEFAULT_SUCCESS_THRESHOLD);
        assert_eq!(c.family(), ProgramFamily::TruncatedEmulation);
        let back = ExperimentConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(ExperimentConfig::from_json(r#"{"kind": "grover"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"trails": 3}"#).is_err());
    }
}
