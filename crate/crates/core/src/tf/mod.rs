//! STFT analysis and synthesis, spectrogram zeros, reassignment.

mod reassign;
mod stft;
mod window;
mod zeros;

pub use reassign::{reassignment_operators, synchrosqueeze, Reassignment, DIVISION_GUARD};
pub use stft::{
    invert, mask_reconstruct, real_spectrogram_band, spectrogram, stft, stft_real, Spectrogram, StftGrid,
    TfMask,
};
pub use window::{gaussian_half_len, gaussian_window, AnalysisWindow};
pub use zeros::{find_zeros, find_zeros_with, GridZeroSet, TieRule};

use crate::error::{invalid, Result};

/// Analysis parameters shared by the zero-based pipelines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfParams {
    /// Gaussian window width `T` in samples.
    pub width: f64,
    /// Number of frequency bins `K`.
    pub bins: usize,
    /// Cells excluded from zero search along every edge.
    pub margin: usize,
}

impl TfParams {
    /// `K = N`, `T = sqrt(K)`, margin `ceil(T)`.
    pub fn for_length(n: usize) -> Self {
        let width = (n as f64).sqrt();
        Self {
            width,
            bins: n,
            margin: width.ceil() as usize,
        }
    }

    pub fn with_width(mut self, width: f64) -> Self {
        self.width = width;
        self.margin = width.ceil() as usize;
        self
    }

    /// Columns `0..=K/2`: the non-negative frequencies of a real signal.
    pub fn band_cols(&self) -> usize {
        self.bins / 2 + 1
    }

    pub fn window(&self) -> Result<AnalysisWindow<f64>> {
        gaussian_window(self.width)
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if self.bins < n {
            return Err(invalid(format!("need K >= N, got N={n}, K={}", self.bins)));
        }
        if self.margin == 0 {
            return Err(invalid("margin must be at least 1"));
        }
        Ok(())
    }
}

/// Zeros of the non-negative frequency band of a real signal's spectrogram.
pub fn real_band_zeros(x: &[f64], params: &TfParams) -> Result<GridZeroSet> {
    params.check(x.len())?;
    let window = params.window()?;
    let spec = real_spectrogram_band(x, &window, params.bins, params.band_cols())?;
    Ok(find_zeros(&spec, params.margin))
}
