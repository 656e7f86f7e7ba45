use ndarray::Array2;

use super::{analyse, reconstruct, DenoiseOutput, Setting};
use crate::detection::{adaptive_r0_with, AdaptiveConfig, EnsembleCache};
use crate::error::{invalid, Result};
use crate::geometry::squared_distance_transform;
use crate::point_process::{PlanarPointSet, PlaneScale};
use crate::tf::TfMask;

/// Boolean raster of `points`, which must sit on grid nodes of `scale`.
pub(crate) fn rasterize_points(
    points: &[[f64; 2]],
    shape: (usize, usize),
    scale: &PlaneScale,
) -> Result<Array2<bool>> {
    let mut out = Array2::from_elem(shape, false);
    for p in points {
        let n = p[0] / scale.time_step;
        let k = p[1] / scale.freq_step;
        let (rn, rk) = (n.round(), k.round());
        if (n - rn).abs() > 1e-6 || (k - rk).abs() > 1e-6 {
            return Err(invalid(format!("point {p:?} is not on a grid node")));
        }
        if rn < 0.0 || rk < 0.0 || rn as usize >= shape.0 || rk as usize >= shape.1 {
            return Err(invalid(format!("point {p:?} outside the {shape:?} grid")));
        }
        out[[rn as usize, rk as usize]] = true;
    }
    Ok(out)
}

/// Grid cells farther than `r0` from every zero: centers of zero-free balls.
pub fn empty_space_centers(
    zeros: &PlanarPointSet,
    r0: f64,
    shape: (usize, usize),
    scale: &PlaneScale,
) -> Result<TfMask> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(invalid(format!("r0 must be positive, got {r0}")));
    }
    let features = rasterize_points(zeros.points(), shape, scale)?;
    let d2 = squared_distance_transform(&features, scale.time_step, scale.freq_step);
    Ok(TfMask::from_values(d2.mapv(|d| d > r0 * r0)))
}

/// Union of the zero-free balls of radius `r0` centered on grid cells.
pub fn empty_space_mask(
    zeros: &PlanarPointSet,
    r0: f64,
    shape: (usize, usize),
    scale: &PlaneScale,
) -> Result<TfMask> {
    let centers = empty_space_centers(zeros, r0, shape, scale)?;
    let d2 = squared_distance_transform(centers.values(), scale.time_step, scale.freq_step);
    Ok(TfMask::from_values(d2.mapv(|d| d <= r0 * r0)))
}

/// Empty-space denoising with `T = sqrt(K)`, `K = N`.
///
/// `Setting::Auto` estimates `r0` with the adaptive rank test using `m`
/// simulations seeded by `seed`. The returned mask covers all `K` bins.
pub fn empty_space_denoise(x: &[f64], r0: Setting, m: usize, seed: u64) -> Result<DenoiseOutput> {
    let a = analyse(x)?;
    let r0 = match r0 {
        Setting::Fixed(v) => v,
        Setting::Auto => adaptive_r0_with(x, &AdaptiveConfig::new(m, seed), Some(EnsembleCache::global()))?.r0,
    };
    let band = empty_space_mask(&a.zeros, r0, a.band_shape(), &a.scale)?;
    reconstruct(&a, band, r0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point_process::Rect;
    use rand::{seq::index::sample, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_zeros(seed: u64, count: usize, shape: (usize, usize), scale: &PlaneScale) -> PlanarPointSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = sample(&mut rng, shape.0 * shape.1, count)
            .into_iter()
            .map(|i| scale.to_plane((i / shape.1) as f64, (i % shape.1) as f64))
            .collect();
        let hi = scale.to_plane((shape.0 - 1) as f64, (shape.1 - 1) as f64);
        PlanarPointSet::new(pts, Rect::new(0.0, hi[0], 0.0, hi[1]).unwrap()).unwrap()
    }

    fn brute_mask(zeros: &PlanarPointSet, r0: f64, shape: (usize, usize), scale: &PlaneScale) -> Array2<bool> {
        let d2 = |a: (usize, usize), b: (usize, usize)| {
            let dn = a.0.abs_diff(b.0) as f64 * scale.time_step;
            let dk = a.1.abs_diff(b.1) as f64 * scale.freq_step;
            dn * dn + dk * dk
        };
        let cells: Vec<(usize, usize)> = (0..shape.0).flat_map(|n| (0..shape.1).map(move |k| (n, k))).collect();
        let zero_cells: Vec<(usize, usize)> = zeros
            .points()
            .iter()
            .map(|p| ((p[0] / scale.time_step).round() as usize, (p[1] / scale.freq_step).round() as usize))
            .collect();
        let centers: Vec<(usize, usize)> = cells
            .iter()
            .copied()
            .filter(|&c| zero_cells.iter().all(|&z| d2(c, z) > r0 * r0))
            .collect();
        Array2::from_shape_fn(shape, |u| centers.iter().any(|&c| d2(u, c) <= r0 * r0))
    }

    #[test]
    fn matches_brute_force_on_random_configuration() {
        let shape = (64, 64);
        let scale = PlaneScale::new(8.0, 64);
        for seed in 0..3 {
            let zeros = random_zeros(seed, 30, shape, &scale);
            for r0 in [0.55, 0.8, 1.3] {
                let fast = empty_space_mask(&zeros, r0, shape, &scale).unwrap();
                assert_eq!(fast.values(), &brute_mask(&zeros, r0, shape, &scale), "seed {seed}, r0 {r0}");
            }
        }
    }

    #[test]
    fn anisotropic_scale_matches_brute_force() {
        let shape = (40, 21);
        let scale = PlaneScale::new(6.3, 40);
        let zeros = random_zeros(5, 25, shape, &scale);
        let fast = empty_space_mask(&zeros, 0.9, shape, &scale).unwrap();
        assert_eq!(fast.values(), &brute_mask(&zeros, 0.9, shape, &scale));
    }

    #[test]
    fn no_zeros_gives_full_mask() {
        let scale = PlaneScale::new(8.0, 64);
        let zeros = PlanarPointSet::new(vec![], Rect::new(0.0, 1.0, 0.0, 1.0).unwrap()).unwrap();
        let m = empty_space_mask(&zeros, 0.5, (16, 16), &scale).unwrap();
        assert_eq!(m.count(), 256);
    }

    #[test]
    fn dense_lattice_gives_empty_mask() {
        let scale = PlaneScale::new(8.0, 64);
        let shape = (32, 32);
        let pts: Vec<[f64; 2]> = (0..32)
            .step_by(2)
            .flat_map(|n| (0..32).step_by(2).map(move |k| [n as f64, k as f64]))
            .map(|[n, k]| scale.to_plane(n, k))
            .collect();
        let hi = scale.to_plane(31.0, 31.0);
        let zeros = PlanarPointSet::new(pts, Rect::new(0.0, hi[0], 0.0, hi[1]).unwrap()).unwrap();
        // covering radius is one cell diagonal, about 0.18
        assert_eq!(empty_space_mask(&zeros, 0.3, shape, &scale).unwrap().count(), 0);
    }

    #[test]
    fn centers_shrink_as_radius_grows() {
        let shape = (48, 48);
        let scale = PlaneScale::new(7.0, 48);
        for seed in 0..10 {
            let zeros = random_zeros(100 + seed, 20, shape, &scale);
            let small = empty_space_centers(&zeros, 0.6, shape, &scale).unwrap();
            let large = empty_space_centers(&zeros, 0.9, shape, &scale).unwrap();
            assert!(large.is_subset_of(&small));
        }
    }

    #[test]
    fn off_grid_points_are_rejected() {
        let scale = PlaneScale::new(8.0, 64);
        let zeros = PlanarPointSet::new(vec![[0.3, 0.3]], Rect::new(0.0, 1.0, 0.0, 1.0).unwrap()).unwrap();
        assert!(empty_space_mask(&zeros, 0.5, (16, 16), &scale).is_err());
        assert!(empty_space_mask(&zeros, 0.0, (16, 16), &scale).is_err());
    }
}
