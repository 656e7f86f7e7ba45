//! Interval estimates for benchmark summaries.

use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::function::beta::beta_reg;

use crate::error::{invalid, Result};

/// Fraction of `true` outcomes.
pub fn detection_power(outcomes: &[bool]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(invalid("no outcomes"));
    }
    Ok(outcomes.iter().filter(|&&b| b).count() as f64 / outcomes.len() as f64)
}

/// Per-comparison confidence `1 - (1 - confidence) / comparisons`.
pub fn bonferroni_adjust(confidence: f64, comparisons: usize) -> Result<f64> {
    if comparisons == 0 {
        return Err(invalid("need at least one comparison"));
    }
    check_confidence(confidence)?;
    Ok(1.0 - (1.0 - confidence) / comparisons as f64)
}

fn check_confidence(c: f64) -> Result<()> {
    if !(c > 0.0 && c < 1.0) {
        return Err(invalid(format!("confidence must be in (0, 1), got {c}")));
    }
    Ok(())
}

/// Smallest `p` with `I_p(a, b) >= target`, by bisection to 1e-10.
fn beta_quantile(a: f64, b: f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if beta_reg(a, b, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact binomial interval from Beta quantiles; `lo = 0` without successes and
/// `hi = 1` when every trial succeeds.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(invalid(format!("invalid counts {successes}/{trials}")));
    }
    check_confidence(confidence)?;
    let tail = (1.0 - confidence) / 2.0;
    let (x, n) = (successes as f64, trials as f64);
    let lo = if successes == 0 { 0.0 } else { beta_quantile(x, n - x + 1.0, tail) };
    let hi = if successes == trials { 1.0 } else { beta_quantile(x + 1.0, n - x, 1.0 - tail) };
    Ok((lo, hi))
}

/// Mean with a Student-t interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanInterval {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// Fewer than two values or zero spread: the interval collapses to the mean.
    pub degenerate: bool,
}

impl MeanInterval {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

/// `mean ± t_{n-1} s / sqrt(n)` at the given two-sided confidence.
pub fn mean_t_interval(values: &[f64], confidence: f64) -> Result<MeanInterval> {
    check_confidence(confidence)?;
    if values.is_empty() {
        return Err(invalid("no values"));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return Ok(MeanInterval {
            mean,
            lo: mean,
            hi: mean,
            count: n,
            degenerate: true,
        });
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .map_err(|e| invalid(e.to_string()))?
        .inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let half = t * (var / n as f64).sqrt();
    Ok(MeanInterval {
        mean,
        lo: mean - half,
        hi: mean + half,
        count: n,
        degenerate: half == 0.0,
    })
}
