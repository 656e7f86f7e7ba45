use ndarray::Array2;

use super::{analyse, reconstruct, DenoiseOutput, Setting};
use crate::detection::{adaptive_r0_with, AdaptiveConfig, EnsembleCache};
use crate::error::{invalid, Result};
use crate::geometry::{triangulate, Triangle, Triangulation};
use crate::point_process::{PlaneScale, Rect};
use crate::tf::TfMask;

/// Triangle selection options.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TriangleSelection {
    /// Drop triangles whose circumcircle leaves this window.
    pub exclude_border: Option<Rect>,
}

impl TriangleSelection {
    fn keeps(&self, t: &Triangle, l_max: f64) -> bool {
        if t.max_edge() <= l_max {
            return false;
        }
        match &self.exclude_border {
            Some(w) => {
                let c = t.circumcenter();
                w.contains(c) && w.border_distance(c) >= t.circumradius()
            }
            None => true,
        }
    }
}

/// Cells inside (or on) any triangle with an edge longer than `l_max`.
pub fn dt_mask(tri: &Triangulation, l_max: f64, shape: (usize, usize), scale: &PlaneScale) -> Result<TfMask> {
    dt_mask_with(tri, l_max, shape, scale, &TriangleSelection::default())
}

pub fn dt_mask_with(
    tri: &Triangulation,
    l_max: f64,
    shape: (usize, usize),
    scale: &PlaneScale,
    selection: &TriangleSelection,
) -> Result<TfMask> {
    if !(l_max > 0.0) || l_max.is_nan() {
        return Err(invalid(format!("l_max must be positive, got {l_max}")));
    }
    let mut mask = Array2::from_elem(shape, false);
    if shape.0 == 0 || shape.1 == 0 {
        return Ok(TfMask::from_values(mask));
    }
    for t in tri.triangles().iter().filter(|t| selection.keeps(t, l_max)) {
        let lo_u = t.corners.iter().map(|c| c[0]).fold(f64::INFINITY, f64::min);
        let hi_u = t.corners.iter().map(|c| c[0]).fold(f64::NEG_INFINITY, f64::max);
        let lo_v = t.corners.iter().map(|c| c[1]).fold(f64::INFINITY, f64::min);
        let hi_v = t.corners.iter().map(|c| c[1]).fold(f64::NEG_INFINITY, f64::max);
        let span = |lo: f64, hi: f64, step: f64, len: usize| {
            let a = ((lo / step).floor() - 1.0).max(0.0) as usize;
            let b = ((hi / step).ceil() + 1.0).min((len - 1) as f64);
            if b < 0.0 {
                return 0..0;
            }
            a..(b as usize + 1)
        };
        for n in span(lo_u, hi_u, scale.time_step, shape.0) {
            for k in span(lo_v, hi_v, scale.freq_step, shape.1) {
                if !mask[[n, k]] && t.contains(scale.to_plane(n as f64, k as f64)) {
                    mask[[n, k]] = true;
                }
            }
        }
    }
    Ok(TfMask::from_values(mask))
}

/// Delaunay-triangle denoising with `T = sqrt(K)`, `K = N`.
///
/// `Setting::Auto` uses `l_max = 2 r0` with the adaptive `r0`.
pub fn dt_denoise(x: &[f64], l_max: Setting, m: usize, seed: u64) -> Result<DenoiseOutput> {
    let a = analyse(x)?;
    let l_max = match l_max {
        Setting::Fixed(v) => v,
        Setting::Auto => {
            2.0 * adaptive_r0_with(x, &AdaptiveConfig::new(m, seed), Some(EnsembleCache::global()))?.r0
        }
    };
    let tri = triangulate(a.zeros.points())?;
    let band = dt_mask(&tri, l_max, a.band_shape(), &a.scale)?;
    reconstruct(&a, band, l_max)
}
