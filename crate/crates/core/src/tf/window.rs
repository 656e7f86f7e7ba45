use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Symmetric, unit-energy analysis window sampled on `-half_len..=half_len`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisWindow<T> {
    width: T,
    half_len: usize,
    samples: Vec<T>,
}

/// Half support needed so the dropped Gaussian tail is below 1e-16 per tap.
pub fn gaussian_half_len(width: f64) -> usize {
    (width * ((1e16f64).ln() / std::f64::consts::PI).sqrt()).ceil() as usize
}

/// Unit-energy Gaussian window `g[n] = 2^{1/4}/sqrt(T) exp(-pi (n/T)^2)`.
///
/// The analytic samples are truncated to [`gaussian_half_len`] and rescaled so
/// that the discrete energy is exactly one.
pub fn gaussian_window<T: Real>(width: T) -> Result<AnalysisWindow<T>> {
    let t = width.to_f64_lossy();
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid(format!("window width must be positive, got {t}")));
    }
    let half_len = gaussian_half_len(t);
    let raw: Vec<f64> = (-(half_len as i64)..=half_len as i64)
        .map(|n| {
            let u = n as f64 / t;
            2f64.powf(0.25) / t.sqrt() * (-std::f64::consts::PI * u * u).exp()
        })
        .collect();
    let energy: f64 = raw.iter().map(|g| g * g).sum();
    let scale = energy.sqrt().recip();
    Ok(AnalysisWindow {
        width,
        half_len,
        samples: raw.iter().map(|g| T::of(g * scale)).collect(),
    })
}

impl<T: Real> AnalysisWindow<T> {
    pub fn width(&self) -> T {
        self.width
    }

    pub fn half_len(&self) -> usize {
        self.half_len
    }

    /// Samples ordered from `-half_len` to `half_len`.
    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    /// `g[m]`, zero outside the support.
    pub fn at(&self, m: i64) -> T {
        let idx = m + self.half_len as i64;
        if idx < 0 || idx as usize >= self.samples.len() {
            T::zero()
        } else {
            self.samples[idx as usize]
        }
    }

    pub fn center(&self) -> T {
        self.samples[self.half_len]
    }

    /// Center value of the window periodized over `period` samples.
    ///
    /// Equals [`center`](Self::center) whenever the support is shorter than the period.
    pub fn periodized_center(&self, period: usize) -> T {
        let mut acc = T::zero();
        let l = self.half_len as i64;
        let p = period as i64;
        let mut m = -(l / p) * p;
        while m <= l {
            acc = acc + self.at(m);
            m += p;
        }
        acc
    }

    /// Time-weighted window `m * g[m]`.
    pub fn time_weighted(&self) -> Vec<T> {
        self.indexed()
            .map(|(m, g)| T::of(m as f64) * g)
            .collect()
    }

    /// Analytic derivative `g'[m] = -2 pi m / T^2 g[m]` (per sample).
    pub fn derivative(&self) -> Vec<T> {
        let t = self.width;
        let c = -T::of(2.0) * T::PI() / (t * t);
        self.indexed().map(|(m, g)| c * T::of(m as f64) * g).collect()
    }

    fn indexed(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        let l = self.half_len as i64;
        self.samples
            .iter()
            .enumerate()
            .map(move |(i, &g)| (i as i64 - l, g))
    }
}
