use ndarray::Array2;
use num_complex::Complex;

use super::stft::{stft_triple, twiddles, StftGrid, TfMask};
use super::window::AnalysisWindow;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Division guard relative to the spectrogram maximum.
pub const DIVISION_GUARD: f64 = 1e-14;

/// Time and frequency reassignment operators, in samples and bins.
///
/// Entries whose STFT magnitude is too small to divide by are NaN in both
/// maps and false in [`valid`](Self::valid).
#[derive(Debug, Clone)]
pub struct Reassignment<T> {
    pub tau: Array2<T>,
    pub nu: Array2<T>,
    pub valid: TfMask,
    /// STFT with the plain window, computed along the way.
    pub grid: StftGrid<T>,
}

/// `tau = n + Re(V^{ng}/V^g)`, `nu = k - K/(2 pi) Im(V^{g'}/V^g)`.
///
/// A cell is invalid when `|V|^2 <= 1e-14 max |V|^2`, so an all-zero grid is
/// entirely invalid and no division by zero happens.
pub fn reassignment_operators<T: Real>(
    x: &[Complex<T>],
    window: &AnalysisWindow<T>,
    bins: usize,
) -> Result<Reassignment<T>> {
    let [vg, vt, vd] = stft_triple(x, window, bins)?;
    let max = vg.iter().fold(T::zero(), |a, v| a.max(v.norm_sqr()));
    let guard = T::of(DIVISION_GUARD) * max;
    let scale = T::of_usize(bins) / (T::of(2.0) * T::PI());
    let dim = vg.dim();
    let mut tau = Array2::from_elem(dim, T::nan());
    let mut nu = Array2::from_elem(dim, T::nan());
    let mut valid = Array2::from_elem(dim, false);
    for ((n, k), v) in vg.indexed_iter() {
        if v.norm_sqr() > guard {
            tau[[n, k]] = T::of_usize(n) + (vt[[n, k]] / v).re;
            nu[[n, k]] = T::of_usize(k) - scale * (vd[[n, k]] / v).im;
            valid[[n, k]] = true;
        }
    }
    Ok(Reassignment {
        tau,
        nu,
        valid: TfMask::from_values(valid),
        grid: StftGrid::from_parts(vg, window.clone())?,
    })
}

/// Vertical reassignment `T[n,k] = sum_{q : round(nu[n,q]) = k} V[n,q] exp(i 2 pi q n / K)`.
///
/// Each coefficient moves to the bin nearest its frequency estimate (a value
/// exactly halfway rounds up), so no coefficient is counted twice. NaN
/// estimates and estimates outside `[-1/2, K - 1/2)` are dropped.
pub fn synchrosqueeze<T: Real>(grid: &StftGrid<T>, nu: &Array2<T>) -> Result<Array2<Complex<T>>> {
    if grid.dim() != nu.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            actual: nu.dim(),
        });
    }
    let (rows, bins) = grid.dim();
    let tw = twiddles::<T>(bins);
    let half = T::of(0.5);
    let mut out = Array2::from_elem((rows, bins), Complex::new(T::zero(), T::zero()));
    let v = grid.values();
    for n in 0..rows {
        let step = n % bins;
        let mut idx = 0usize;
        for q in 0..bins {
            let f = nu[[n, q]];
            if f.is_finite() {
                let target = (f + half).floor();
                if target >= T::zero() && target < T::of_usize(bins) {
                    let k = target.to_usize().unwrap_or(0);
                    out[[n, k]] = out[[n, k]] + v[[n, q]] * tw[idx];
                }
            }
            idx += step;
            if idx >= bins {
                idx -= bins;
            }
        }
    }
    Ok(out)
}
