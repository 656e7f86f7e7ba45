//! Denoising by STFT thresholding, zero-free regions, Delaunay triangles and
//! synchrosqueezed ridges.

mod empty_space;
mod regions;
mod ridges;
mod threshold;
mod triangles;

pub use empty_space::{empty_space_centers, empty_space_denoise, empty_space_mask};
pub use regions::isolated_region_count;
pub use ridges::{
    default_band, extract_ridges, sst_rd_denoise, sst_rd_denoise_with, RidgeSet, SstOutput, RIDGE_FLOOR, RIDGE_MU,
};
pub use threshold::{
    estimate_noise_std, garrote_threshold, hard_threshold, hard_threshold_mask, GARROTE_C, HARD_C,
};
pub use triangles::{dt_denoise, dt_mask, dt_mask_with, TriangleSelection};

use ndarray::s;

use crate::error::Result;
use crate::point_process::{scale_zeros, PlanarPointSet, PlaneScale};
use crate::tf::{find_zeros, invert, mask_reconstruct, stft_real, Spectrogram, StftGrid, TfMask, TfParams};

/// A scale parameter given explicitly or estimated from the data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Setting {
    Fixed(f64),
    Auto,
}

/// Estimate produced by a mask-based denoiser.
#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseOutput {
    pub s_hat: Vec<f64>,
    /// Extraction mask over all `K` bins.
    pub mask: TfMask,
    /// The `r0` or `l_max` actually used.
    pub parameter: f64,
}

/// Thresholding rule applied to the STFT coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdRule {
    Hard,
    Garrote,
}

/// Thresholds the STFT of `x` with `lambda = c sigma_hat` and inverts it.
pub fn threshold_denoise(x: &[f64], rule: ThresholdRule, c: f64) -> Result<Vec<f64>> {
    let params = TfParams::for_length(x.len());
    params.check(x.len())?;
    let grid = stft_real(x, &params.window()?, params.bins)?;
    let kept = match rule {
        ThresholdRule::Hard => hard_threshold(&grid, c)?,
        ThresholdRule::Garrote => garrote_threshold(&grid, c)?,
    };
    Ok(invert(&kept).into_iter().map(|v| v.re).collect())
}

pub(crate) struct Analysis {
    params: TfParams,
    grid: StftGrid<f64>,
    zeros: PlanarPointSet,
    scale: PlaneScale,
}

impl Analysis {
    fn band_shape(&self) -> (usize, usize) {
        (self.grid.dim().0, self.params.band_cols())
    }
}

/// STFT with `T = sqrt(K)`, `K = N`, and every zero of the non-negative band
/// away from the outermost cells.
pub(crate) fn analyse(x: &[f64]) -> Result<Analysis> {
    let params = TfParams::for_length(x.len());
    params.check(x.len())?;
    let grid = stft_real(x, &params.window()?, params.bins)?;
    let band = Spectrogram::from_values(grid.values().slice(s![.., 0..params.band_cols()]).mapv(|v| v.norm_sqr()));
    let scale = PlaneScale::from_params(&params);
    let zeros = scale_zeros(&find_zeros(&band, 1), &scale)?;
    Ok(Analysis {
        params,
        grid,
        zeros,
        scale,
    })
}

pub(crate) fn reconstruct(a: &Analysis, band: TfMask, parameter: f64) -> Result<DenoiseOutput> {
    let mask = band.mirror_band(a.params.bins);
    let s_hat = mask_reconstruct(&a.grid, &mask)?.into_iter().map(|v| v.re).collect();
    Ok(DenoiseOutput {
        s_hat,
        mask,
        parameter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::FALLBACK_R0;
    use crate::geometry::triangulate;
    use crate::point_process::PointIndex;
    use crate::rng::white_noise;

    fn qrf(s: &[f64], s_hat: &[f64]) -> f64 {
        let num: f64 = s.iter().map(|v| v * v).sum();
        let den: f64 = s.iter().zip(s_hat).map(|(a, b)| (a - b).powi(2)).sum();
        10.0 * (num / den).log10()
    }

    fn bin_tone(n: usize, k0: usize, amp: f64) -> Vec<f64> {
        (0..n)
            .map(|i| amp * (2.0 * std::f64::consts::PI * (i * k0) as f64 / n as f64).cos())
            .collect()
    }

    #[test]
    fn empty_space_keeps_a_strong_tone() {
        let s = bin_tone(512, 96, 1.0);
        let out = empty_space_denoise(&s, Setting::Fixed(1.0), 0, 0).unwrap();
        assert_eq!(out.mask.dim(), (512, 512));
        assert!(qrf(&s, &out.s_hat) > 20.0, "QRF {}", qrf(&s, &out.s_hat));
    }

    #[test]
    fn auto_settings_fall_back_on_noise() {
        let x = white_noise(2024, 0, 256, 1.0);
        let es = empty_space_denoise(&x, Setting::Auto, 199, 5).unwrap();
        assert_eq!(es.parameter, FALLBACK_R0);
        let dt = dt_denoise(&x, Setting::Auto, 199, 5).unwrap();
        assert_eq!(dt.parameter, 2.0 * FALLBACK_R0);
        assert_eq!(dt_denoise(&x, Setting::Auto, 199, 5).unwrap(), dt);
    }

    #[test]
    fn masks_are_invariant_to_power_of_two_scaling() {
        let x = white_noise(31, 0, 256, 1.0);
        let y: Vec<f64> = x.iter().map(|v| 4.0 * v).collect();
        let a = empty_space_denoise(&x, Setting::Fixed(0.8), 0, 0).unwrap();
        let b = empty_space_denoise(&y, Setting::Fixed(0.8), 0, 0).unwrap();
        assert_eq!(a.mask, b.mask);
        let a = dt_denoise(&x, Setting::Fixed(1.6), 0, 0).unwrap();
        let b = dt_denoise(&y, Setting::Fixed(1.6), 0, 0).unwrap();
        assert_eq!(a.mask, b.mask);
    }

    #[test]
    fn large_circumdisks_are_zero_free() {
        let x = white_noise(12, 0, 256, 1.0);
        let a = analyse(&x).unwrap();
        let tri = triangulate(a.zeros.points()).unwrap();
        let index = PointIndex::new(a.zeros.points());
        let r0 = 0.6;
        let mut checked = 0;
        for t in tri.triangles().iter().filter(|t| t.circumradius() > r0) {
            let d = index.nearest_distance(t.circumcenter());
            assert!(d > r0);
            assert!((d - t.circumradius()).abs() < 1e-9 * t.circumradius());
            checked += 1;
        }
        assert!(checked > 0);
    }

    #[test]
    fn sst_recovers_a_pure_tone() {
        let s = bin_tone(512, 64, 1.0);
        let out = sst_rd_denoise(&s, 1, None).unwrap();
        assert_eq!(out.eps, 23);
        assert!(qrf(&s, &out.s_hat) > 30.0, "QRF {}", qrf(&s, &out.s_hat));
        assert!(out.ridges.ridges[0][10..500].iter().all(|&k| k == 64));
    }

    #[test]
    fn sst_components_add_up() {
        let x: Vec<f64> = bin_tone(256, 20, 1.0)
            .iter()
            .zip(bin_tone(256, 70, 0.5))
            .zip(white_noise(1, 0, 256, 0.1))
            .map(|((a, b), c)| a + b + c)
            .collect();
        let out = sst_rd_denoise(&x, 3, None).unwrap();
        assert_eq!(out.components.len(), 3);
        for n in 0..256 {
            let sum = out.components[0][n] + out.components[1][n] + out.components[2][n];
            assert_eq!(sum, out.s_hat[n]);
        }
    }

    #[test]
    fn threshold_denoising_improves_snr() {
        let s = bin_tone(512, 100, 1.0);
        let noise = white_noise(3, 0, 512, 0.3);
        let x: Vec<f64> = s.iter().zip(&noise).map(|(a, b)| a + b).collect();
        let input = qrf(&s, &x);
        for rule in [ThresholdRule::Hard, ThresholdRule::Garrote] {
            let c = if rule == ThresholdRule::Hard { HARD_C } else { GARROTE_C };
            let y = threshold_denoise(&x, rule, c).unwrap();
            assert!(qrf(&s, &y) > input + 3.0, "{rule:?}: {} vs {input}", qrf(&s, &y));
        }
    }
}
