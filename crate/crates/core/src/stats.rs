//! Small statistics helpers: Wilson score intervals and chi-square tests.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> Interval {
    if trials == 0 {
        return Interval { lower: 0.0, upper: 1.0 };
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Interval {
        lower: (centre - half).max(0.0),
        upper: (centre + half).min(1.0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
}

/// Pearson goodness-of-fit test of `counts` against the uniform distribution
/// over all cells.
pub fn chi_square_uniform(counts: &[u64]) -> ChiSquareResult {
    let cells = counts.len();
    let total: u64 = counts.iter().sum();
    if cells < 2 || total == 0 {
        return ChiSquareResult {
            statistic: 0.0,
            dof: cells.saturating_sub(1) as u64,
            p_value: 1.0,
        };
    }
    let expected = total as f64 / cells as f64;
    let statistic: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dof = (cells - 1) as u64;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    ChiSquareResult {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_examples() {
        let i = wilson_interval(0, 100, Z_95);
        assert!(i.lower.abs() < 1e-12);
        assert!((i.upper - 0.036994).abs() < 1e-5, "{i:?}");
        let i = wilson_interval(50, 100, Z_95);
        assert!((i.lower - 0.403832).abs() < 1e-5 && (i.upper - 0.596168).abs() < 1e-5, "{i:?}");
        let i = wilson_interval(0, 0, Z_95);
        assert_eq!((i.lower, i.upper), (0.0, 1.0));
    }

    #[test]
    fn wilson_contains_the_point_estimate() {
        for n in [1u64, 7, 100, 5000] {
            for k in 0..=n.min(60) {
                let i = wilson_interval(k, n, Z_95);
                let phat = k as f64 / n as f64;
                assert!(i.lower <= phat + 1e-12 && phat <= i.upper + 1e-12);
            }
        }
    }

    #[test]
    fn chi_square_examples() {
        let r = chi_square_uniform(&[25, 25, 25, 25]);
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        let r = chi_square_uniform(&[100, 0]);
        assert_eq!(r.statistic, 100.0);
        assert!(r.p_value < 1e-20);
        // 3 dof, statistic 7.814728 is the 95% point.
        let r = chi_square_uniform(&[30, 20, 20, 10]);
        assert!((r.statistic - 10.0).abs() < 1e-12);
        assert!((r.p_value - 0.018566).abs() < 1e-5, "{}", r.p_value);
    }
}
