use ndarray::{s, Array2, ArrayView2};
use num_complex::Complex;

use crate::error::{invalid, Result};
use crate::tf::{reassignment_operators, synchrosqueeze, TfParams};

/// Default penalty per squared bin jump between consecutive time indices.
pub const RIDGE_MU: f64 = 0.5;
/// Relative floor added to squared magnitudes before taking logs.
pub const RIDGE_FLOOR: f64 = 1e-12;

/// Frequency-bin trajectories, one per extracted component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RidgeSet {
    pub ridges: Vec<Vec<usize>>,
}

impl RidgeSet {
    pub fn j(&self) -> usize {
        self.ridges.len()
    }
}

/// Lower envelope of `f(q) + mu (p - q)^2`, returning the minimum and its
/// arg-minimum for every `p`.
fn quadratic_min_transform(f: &[f64], mu: f64, value: &mut [f64], arg: &mut [usize]) {
    let len = f.len();
    if mu == 0.0 {
        let (best, &fmin) = f
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty column");
        value.iter_mut().for_each(|v| *v = fmin);
        arg.iter_mut().for_each(|a| *a = best);
        return;
    }
    let mut v = vec![0usize; len];
    let mut z = vec![0.0; len + 1];
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..len {
        loop {
            let r = v[k];
            let s = ((f[q] + mu * (q * q) as f64) - (f[r] + mu * (r * r) as f64)) / (2.0 * mu * (q - r) as f64);
            if s <= z[k] {
                k -= 1;
                continue;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
            break;
        }
    }
    let mut idx = 0;
    for p in 0..len {
        while z[idx + 1] < p as f64 {
            idx += 1;
        }
        let lo = idx.saturating_sub(1);
        let hi = (idx + 1).min(k);
        let (mut bv, mut ba) = (f64::INFINITY, 0);
        for &q in &v[lo..=hi] {
            let d = p as f64 - q as f64;
            let val = f[q] + mu * d * d;
            if val < bv {
                bv = val;
                ba = q;
            }
        }
        value[p] = bv;
        arg[p] = ba;
    }
}

/// Maximizes `sum_n log(P[n, w_n] + floor) - mu sum_n (w_{n+1} - w_n)^2`.
fn best_path(power: &Array2<f64>, floor: f64, mu: f64) -> Vec<usize> {
    let (rows, cols) = power.dim();
    let mut back = Array2::<usize>::zeros((rows, cols));
    let mut score: Vec<f64> = (0..cols).map(|k| (power[[0, k]] + floor).ln()).collect();
    let mut neg = vec![0.0; cols];
    let mut val = vec![0.0; cols];
    let mut arg = vec![0usize; cols];
    for n in 1..rows {
        for k in 0..cols {
            neg[k] = -score[k];
        }
        quadratic_min_transform(&neg, mu, &mut val, &mut arg);
        for k in 0..cols {
            score[k] = (power[[n, k]] + floor).ln() - val[k];
            back[[n, k]] = arg[k];
        }
    }
    let mut k = (0..cols)
        .max_by(|&a, &b| score[a].total_cmp(&score[b]).then(b.cmp(&a)))
        .expect("non-empty grid");
    let mut path = vec![0; rows];
    for n in (0..rows).rev() {
        path[n] = k;
        k = back[[n, k]];
    }
    path
}

/// Extracts `j` ridges one after another. After each pass, bins within
/// `clear` of the ridge are zeroed.
pub fn extract_ridges(sst: ArrayView2<'_, Complex<f64>>, j: usize, mu: f64, clear: usize) -> Result<RidgeSet> {
    if j == 0 {
        return Err(invalid("need at least one ridge"));
    }
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(invalid(format!("ridge penalty must be non-negative, got {mu}")));
    }
    let (rows, cols) = sst.dim();
    if rows == 0 || cols == 0 {
        return Err(invalid("empty synchrosqueezed grid"));
    }
    let mut power = sst.mapv(|v| v.norm_sqr());
    let max = power.iter().copied().fold(0.0, f64::max);
    let floor = (RIDGE_FLOOR * max).max(f64::MIN_POSITIVE);
    let mut ridges = Vec::with_capacity(j);
    for _ in 0..j {
        let path = best_path(&power, floor, mu);
        for (n, &k) in path.iter().enumerate() {
            let lo = k.saturating_sub(clear);
            let hi = (k + clear).min(cols - 1);
            power.slice_mut(s![n, lo..=hi]).fill(0.0);
        }
        ridges.push(path);
    }
    Ok(RidgeSet { ridges })
}

/// Output of [`sst_rd_denoise`].
#[derive(Debug, Clone, PartialEq)]
pub struct SstOutput {
    pub s_hat: Vec<f64>,
    pub components: Vec<Vec<f64>>,
    pub ridges: RidgeSet,
    pub eps: usize,
}

/// `round(K / T)` bins.
pub fn default_band(params: &TfParams) -> usize {
    (params.bins as f64 / params.width).round() as usize
}

/// Synchrosqueezing with ridge-based mode reconstruction, `T = sqrt(K)`,
/// `K = N`, `mu = 0.5`.
pub fn sst_rd_denoise(x: &[f64], j: usize, eps: Option<usize>) -> Result<SstOutput> {
    sst_rd_denoise_with(x, j, eps, RIDGE_MU)
}

pub fn sst_rd_denoise_with(x: &[f64], j: usize, eps: Option<usize>, mu: f64) -> Result<SstOutput> {
    let params = TfParams::for_length(x.len());
    params.check(x.len())?;
    let window = params.window()?;
    let eps = eps.unwrap_or_else(|| default_band(&params));
    let z: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let r = reassignment_operators(&z, &window, params.bins)?;
    let sst = synchrosqueeze(&r.grid, &r.nu)?;
    let cols = params.band_cols();
    let band = sst.slice(s![.., 0..cols]);
    let ridges = extract_ridges(band, j, mu, eps)?;

    let bins = params.bins;
    let norm = 1.0 / (bins as f64 * window.periodized_center(x.len()));
    let half = eps / 2;
    let components: Vec<Vec<f64>> = ridges
        .ridges
        .iter()
        .map(|path| {
            path.iter()
                .enumerate()
                .map(|(n, &k)| {
                    let lo = k.saturating_sub(half);
                    let hi = (k + half).min(cols - 1);
                    let acc: f64 = (lo..=hi)
                        .map(|q| {
                            // conjugate bins q and K - q coincide at DC and Nyquist
                            let weight = if q == 0 || 2 * q == bins { 1.0 } else { 2.0 };
                            weight * sst[[n, q]].re
                        })
                        .sum();
                    acc * norm
                })
                .collect()
        })
        .collect();
    let mut s_hat = vec![0.0; x.len()];
    for c in &components {
        for (s, v) in s_hat.iter_mut().zip(c) {
            *s += v;
        }
    }
    Ok(SstOutput {
        s_hat,
        components,
        ridges,
        eps,
    })
}
