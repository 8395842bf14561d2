use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials` at quantile `z`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub successes: usize,
    pub trials: usize,
    pub rate: f64,
    /// Wilson 95% interval.
    pub lower: f64,
    pub upper: f64,
}

impl RateEstimate {
    pub fn new(successes: usize, trials: usize) -> Self {
        let (lower, upper) = wilson_interval(successes, trials, Z95);
        let rate = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        RateEstimate { successes, trials, rate, lower, upper }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 8 of 10: centre 0.7248, half-width 0.2105
        let (lo, hi) = wilson_interval(8, 10, Z95);
        assert!((lo - 0.4901625).abs() < 1e-6, "{lo}");
        assert!((hi - 0.9433178).abs() < 1e-6, "{hi}");
        let (lo, hi) = wilson_interval(0, 20, Z95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.1611251).abs() < 1e-6, "{hi}");
        let (lo, hi) = wilson_interval(20, 20, Z95);
        assert!((lo - 0.8388749).abs() < 1e-6);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn estimate_contains_rate() {
        let r = RateEstimate::new(250, 2000);
        assert_eq!(r.rate, 0.125);
        assert!(r.contains(0.125));
        assert!(!r.contains(0.2));
    }
}
