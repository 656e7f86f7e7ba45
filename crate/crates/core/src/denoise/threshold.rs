use num_complex::Complex;

use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::tf::{StftGrid, TfMask};

/// Default multiplier of the noise level for hard thresholding.
pub const HARD_C: f64 = 3.0;
/// Default multiplier of the noise level for the garrote rule.
pub const GARROTE_C: f64 = 2.0;

/// `sqrt(2) / 0.6745 * median |Re V|` over every cell.
pub fn estimate_noise_std<T: Real>(grid: &StftGrid<T>) -> T {
    let mut re: Vec<T> = grid.values().iter().map(|v| v.re.abs()).collect();
    if re.is_empty() {
        return T::zero();
    }
    let mid = re.len() / 2;
    let (_, &mut upper, _) = re.select_nth_unstable_by(mid, |a, b| a.partial_cmp(b).expect("finite STFT"));
    let median = if re.len() % 2 == 1 {
        upper
    } else {
        let lower = re[..mid].iter().copied().fold(T::neg_infinity(), T::max);
        (lower + upper) * T::of(0.5)
    };
    T::SQRT_2() / T::of(0.6745) * median
}

fn threshold_level<T: Real>(grid: &StftGrid<T>, c: f64) -> Result<T> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid(format!("threshold multiplier must be positive, got {c}")));
    }
    Ok(T::of(c) * estimate_noise_std(grid))
}

/// Cells with `|V| > c * sigma_hat`.
pub fn hard_threshold_mask<T: Real>(grid: &StftGrid<T>, c: f64) -> Result<TfMask> {
    let lambda = threshold_level(grid, c)?;
    Ok(TfMask::from_values(grid.values().mapv(|v| v.norm() > lambda)))
}

/// Keeps coefficients with `|V| > c * sigma_hat`, zeroes the rest.
pub fn hard_threshold<T: Real>(grid: &StftGrid<T>, c: f64) -> Result<StftGrid<T>> {
    let lambda = threshold_level(grid, c)?;
    Ok(grid.map(|v| if v.norm() > lambda { v } else { Complex::new(T::zero(), T::zero()) }))
}

/// `(1 - lambda^2 / |V|^2) V` above `lambda = c * sigma_hat`, zero below.
pub fn garrote_threshold<T: Real>(grid: &StftGrid<T>, c: f64) -> Result<StftGrid<T>> {
    let lambda = threshold_level(grid, c)?;
    let l2 = lambda * lambda;
    Ok(grid.map(|v| {
        let m2 = v.norm_sqr();
        if v.norm() > lambda {
            v * (T::one() - l2 / m2)
        } else {
            Complex::new(T::zero(), T::zero())
        }
    }))
}
