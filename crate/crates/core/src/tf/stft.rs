use std::sync::Arc;

use ndarray::{s, Array2, ArrayView2, Axis};
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::window::AnalysisWindow;
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Discrete STFT of an `N`-periodic signal on an `N x K` time-frequency grid.
#[derive(Debug, Clone)]
pub struct StftGrid<T> {
    values: Array2<Complex<T>>,
    window: AnalysisWindow<T>,
}

/// Squared modulus of an STFT.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram<T> {
    values: Array2<T>,
}

/// Boolean extraction mask over a time-frequency grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TfMask {
    values: Array2<bool>,
}

impl<T: Real> StftGrid<T> {
    /// Wraps precomputed coefficients. Requires `K >= N`.
    pub fn from_parts(values: Array2<Complex<T>>, window: AnalysisWindow<T>) -> Result<Self> {
        let (n, k) = values.dim();
        if k < n {
            return Err(invalid(format!("need K >= N, got N={n}, K={k}")));
        }
        Ok(Self { values, window })
    }

    pub fn values(&self) -> &Array2<Complex<T>> {
        &self.values
    }

    pub fn window(&self) -> &AnalysisWindow<T> {
        &self.window
    }

    /// Signal length `N` (rows).
    pub fn signal_len(&self) -> usize {
        self.values.nrows()
    }

    /// Number of frequency bins `K` (columns).
    pub fn bins(&self) -> usize {
        self.values.ncols()
    }

    pub fn dim(&self) -> (usize, usize) {
        self.values.dim()
    }

    /// Same window, coefficients transformed cell by cell.
    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            values: self.values.mapv(f),
            window: self.window.clone(),
        }
    }
}

impl<T: Real> Spectrogram<T> {
    pub fn from_values(values: Array2<T>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &Array2<T> {
        &self.values
    }

    pub fn dim(&self) -> (usize, usize) {
        self.values.dim()
    }

    /// Restriction to the first `cols` frequency bins.
    pub fn band(&self, cols: usize) -> Spectrogram<T> {
        let cols = cols.min(self.values.ncols());
        Spectrogram {
            values: self.values.slice(s![.., ..cols]).to_owned(),
        }
    }

    pub fn max_value(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &b| a.max(b))
    }

    pub fn scaled(&self, c: T) -> Spectrogram<T> {
        Spectrogram {
            values: self.values.mapv(|v| v * c),
        }
    }
}

impl TfMask {
    pub fn from_values(values: Array2<bool>) -> Self {
        Self { values }
    }

    pub fn filled(dim: (usize, usize), value: bool) -> Self {
        Self {
            values: Array2::from_elem(dim, value),
        }
    }

    pub fn values(&self) -> &Array2<bool> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<bool> {
        &mut self.values
    }

    pub fn dim(&self) -> (usize, usize) {
        self.values.dim()
    }

    pub fn count(&self) -> usize {
        self.values.iter().filter(|&&b| b).count()
    }

    pub fn get(&self, n: usize, k: usize) -> bool {
        self.values[[n, k]]
    }

    /// Extends a positive-frequency band mask (bins `0..=K/2`) to all `K`
    /// bins by mirroring `k -> K - k`, as required for real signals.
    pub fn mirror_band(&self, bins: usize) -> TfMask {
        let (rows, cols) = self.dim();
        TfMask {
            values: Array2::from_shape_fn((rows, bins), |(n, k)| {
                let kk = k.min(bins - k);
                kk < cols && self.values[[n, kk]]
            }),
        }
    }

    pub fn union(&self, other: &TfMask) -> Result<TfMask> {
        check_dim(self.dim(), other.dim())?;
        Ok(TfMask {
            values: ndarray::Zip::from(&self.values)
                .and(&other.values)
                .map_collect(|&a, &b| a || b),
        })
    }

    /// True when every set cell of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &TfMask) -> bool {
        self.dim() == other.dim()
            && self
                .values
                .iter()
                .zip(other.values.iter())
                .all(|(&a, &b)| !a || b)
    }
}

fn check_dim(expected: (usize, usize), actual: (usize, usize)) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Frame `n` of the periodic analysis: `buf[l] = sum_m x[l] w[m]` over `l = n + m mod N`.
fn fill_frame<T: Real>(
    buf: &mut [Complex<T>],
    x: &[Complex<T>],
    taps: &[T],
    half_len: usize,
    n: usize,
) {
    buf.iter_mut().for_each(|b| *b = Complex::new(T::zero(), T::zero()));
    let len = x.len() as i64;
    let l = half_len as i64;
    for (i, &w) in taps.iter().enumerate() {
        let idx = (n as i64 + i as i64 - l).rem_euclid(len) as usize;
        buf[idx] = buf[idx] + x[idx] * w;
    }
}

fn analyse<T: Real>(
    x: &[Complex<T>],
    taps: &[T],
    half_len: usize,
    bins: usize,
    fft: &Arc<dyn Fft<T>>,
) -> Array2<Complex<T>> {
    let n = x.len();
    let mut out = Array2::from_elem((n, bins), Complex::new(T::zero(), T::zero()));
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
    for (row_idx, mut row) in out.axis_iter_mut(Axis(0)).enumerate() {
        let buf = row.as_slice_mut().expect("standard layout");
        fill_frame(buf, x, taps, half_len, row_idx);
        fft.process_with_scratch(buf, &mut scratch);
    }
    out
}

fn validate<T>(x: &[T], bins: usize) -> Result<()> {
    if x.is_empty() {
        return Err(invalid("empty signal"));
    }
    if bins < x.len() {
        return Err(invalid(format!(
            "need K >= N for exact inversion, got N={}, K={bins}",
            x.len()
        )));
    }
    Ok(())
}

/// `V[n,k] = sum_l x[l] g[l-n] exp(-i 2 pi l k / K)` with `x` treated as `N`-periodic.
pub fn stft<T: Real>(x: &[Complex<T>], window: &AnalysisWindow<T>, bins: usize) -> Result<StftGrid<T>> {
    validate(x, bins)?;
    let fft = FftPlanner::new().plan_fft_forward(bins);
    let values = analyse(x, window.samples(), window.half_len(), bins, &fft);
    Ok(StftGrid {
        values,
        window: window.clone(),
    })
}

/// [`stft`] of a real signal.
pub fn stft_real<T: Real>(x: &[T], window: &AnalysisWindow<T>, bins: usize) -> Result<StftGrid<T>> {
    let z: Vec<Complex<T>> = x.iter().map(|&v| Complex::new(v, T::zero())).collect();
    stft(&z, window, bins)
}

/// STFTs with the window, the time-weighted window and the window derivative,
/// sharing one FFT plan.
pub(crate) fn stft_triple<T: Real>(
    x: &[Complex<T>],
    window: &AnalysisWindow<T>,
    bins: usize,
) -> Result<[Array2<Complex<T>>; 3]> {
    validate(x, bins)?;
    let fft = FftPlanner::new().plan_fft_forward(bins);
    let l = window.half_len();
    Ok([
        analyse(x, window.samples(), l, bins, &fft),
        analyse(x, &window.time_weighted(), l, bins, &fft),
        analyse(x, &window.derivative(), l, bins, &fft),
    ])
}

/// Elementwise squared modulus.
pub fn spectrogram<T: Real>(grid: &StftGrid<T>) -> Spectrogram<T> {
    Spectrogram {
        values: grid.values.mapv(|v| v.norm_sqr()),
    }
}

/// Spectrogram of a real signal restricted to bins `0..cols`.
///
/// Two frames are packed into one complex FFT, so this costs about half of
/// [`stft_real`] followed by [`spectrogram`].
pub fn real_spectrogram_band<T: Real>(
    x: &[T],
    window: &AnalysisWindow<T>,
    bins: usize,
    cols: usize,
) -> Result<Spectrogram<T>> {
    validate(x, bins)?;
    let n = x.len();
    let cols = cols.min(bins);
    let fft = FftPlanner::new().plan_fft_forward(bins);
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
    let mut buf = vec![Complex::new(T::zero(), T::zero()); bins];
    let mut out = Array2::zeros((n, cols));
    let taps = window.samples();
    let l = window.half_len() as i64;
    let len = n as i64;
    let half = T::of(0.5);
    let mut row = 0;
    while row < n {
        let pair = row + 1 < n;
        buf.iter_mut().for_each(|b| *b = Complex::new(T::zero(), T::zero()));
        for (i, &w) in taps.iter().enumerate() {
            let off = i as i64 - l;
            let a = (row as i64 + off).rem_euclid(len) as usize;
            buf[a].re = buf[a].re + x[a] * w;
            if pair {
                let b = (row as i64 + 1 + off).rem_euclid(len) as usize;
                buf[b].im = buf[b].im + x[b] * w;
            }
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for k in 0..cols {
            let z = buf[k];
            let zc = buf[(bins - k) % bins].conj();
            let a = (z + zc) * half;
            out[[row, k]] = a.norm_sqr();
            if pair {
                let b = (z - zc) * half;
                // (z - zc) / 2i has the same modulus as (z - zc) / 2
                out[[row + 1, k]] = b.norm_sqr();
            }
        }
        row += 2;
    }
    Ok(Spectrogram { values: out })
}

/// `s[n] = 1/(K g(0)) sum_k V[n,k] mask[n,k] exp(i 2 pi n k / K)`.
///
/// `g(0)` is the window center periodized over `N`, identical to the plain
/// center whenever the window support is shorter than the signal.
pub fn mask_reconstruct<T: Real>(grid: &StftGrid<T>, mask: &TfMask) -> Result<Vec<Complex<T>>> {
    check_dim(grid.dim(), mask.dim())?;
    Ok(synthesize(grid.values.view(), Some(mask.values.view()), grid.window()))
}

/// Inverse of [`stft`] with every coefficient kept.
pub fn invert<T: Real>(grid: &StftGrid<T>) -> Vec<Complex<T>> {
    synthesize(grid.values.view(), None, grid.window())
}

fn synthesize<T: Real>(
    values: ArrayView2<'_, Complex<T>>,
    mask: Option<ArrayView2<'_, bool>>,
    window: &AnalysisWindow<T>,
) -> Vec<Complex<T>> {
    let (n, bins) = values.dim();
    let twiddles = twiddles::<T>(bins);
    let norm = (T::of_usize(bins) * window.periodized_center(n)).recip();
    (0..n)
        .map(|row| {
            let step = row % bins;
            let mut idx = 0usize;
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..bins {
                let keep = mask.is_none_or(|m| m[[row, k]]);
                if keep {
                    acc = acc + values[[row, k]] * twiddles[idx];
                }
                idx += step;
                if idx >= bins {
                    idx -= bins;
                }
            }
            acc * norm
        })
        .collect()
}

/// `exp(i 2 pi j / K)` for `j in 0..K`.
pub(crate) fn twiddles<T: Real>(bins: usize) -> Vec<Complex<T>> {
    (0..bins)
        .map(|j| {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / bins as f64;
            Complex::new(T::of(phi.cos()), T::of(phi.sin()))
        })
        .collect()
}
