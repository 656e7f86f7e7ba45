//! Monte Carlo checks against frozen reference values.

use num_complex::Complex;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tfzeros::detection::{adaptive_r0, simulate_null_ensemble, NullEnsemble, NullModel, TestConfig, TestKind};
use tfzeros::point_process::{mean_nearest_neighbor_distance, PlaneScale, RadiusGrid, SummaryKind};
use tfzeros::rng::{hash_seed, white_noise};
use tfzeros::signals::{add_noise_at_snr, make_signal, SignalParams};
use tfzeros::stats::clopper_pearson;
use tfzeros::tf::{find_zeros, real_spectrogram_band, spectrogram, stft, TfParams};

/// Mean zero count of complex white noise, N = K = 512, T = sqrt(K), margin 1,
/// over 200 realizations. Unit zero density predicts 510^2 / 512 = 508.0.
const ZERO_COUNT_512: f64 = 507.91;

/// Mean of 2499 empty space curves at r = 0.5, N = 256.
const EMPTY_SPACE_AT_HALF: f64 = 0.6672;

#[test]
fn white_noise_zero_count_matches_reference() {
    let n = 512;
    let window = TfParams::for_length(n).window().unwrap();
    for r in 0..5u64 {
        let re = white_noise(hash_seed(&[1, r]), 0, n, 1.0);
        let im = white_noise(hash_seed(&[1, r]), 1, n, 1.0);
        let x: Vec<Complex<f64>> = re.iter().zip(&im).map(|(a, b)| Complex::new(*a, *b)).collect();
        let count = find_zeros(&spectrogram(&stft(&x, &window, n).unwrap()), 1).len() as f64;
        assert!((count / ZERO_COUNT_512 - 1.0).abs() <= 0.1, "{count} zeros");
    }
}

#[test]
fn nearest_neighbor_distance_is_scale_free() {
    let n = 1024;
    let mean_nn = |width: f64| {
        let p = TfParams::for_length(n).with_width(width);
        let scale = PlaneScale::from_params(&p);
        let window = p.window().unwrap();
        let d: Vec<f64> = (0..100u64)
            .into_par_iter()
            .map(|r| {
                let x = white_noise(hash_seed(&[2, r]), 0, n, 1.0);
                let spec = real_spectrogram_band(&x, &window, n, p.band_cols()).unwrap();
                let pts: Vec<[f64; 2]> = find_zeros(&spec, p.margin)
                    .points()
                    .iter()
                    .map(|&(a, b)| scale.to_plane(a as f64, b as f64))
                    .collect();
                mean_nearest_neighbor_distance(&pts).unwrap()
            })
            .collect();
        d.iter().sum::<f64>() / d.len() as f64
    };
    let (a, b) = (mean_nn(32.0), mean_nn(64.0));
    assert!((b / a - 1.0).abs() <= 0.05, "{a} vs {b}");
}

#[test]
fn ensemble_mean_is_reproducible_across_seeds() {
    let radii = RadiusGrid::new(vec![0.25, 0.5, 0.75]).unwrap();
    let model = NullModel::new(256, radii, SummaryKind::F);
    let means: Vec<f64> = [11u64, 12]
        .iter()
        .map(|&seed| {
            let e = simulate_null_ensemble(2499, &model, seed).unwrap();
            e.curves().iter().map(|c| c.values()[1]).sum::<f64>() / 2499.0
        })
        .collect();
    assert!((means[0] - means[1]).abs() <= 0.01, "{means:?}");
    assert!(means.iter().all(|m| (m - EMPTY_SPACE_AT_HALF).abs() <= 0.01), "{means:?}");
}

/// Each trial draws 2500 distinct curves from a shared pool of i.i.d. null
/// curves, so observation and ensemble are exchangeable within a trial.
/// The rate must not be significantly above the level: the 99% lower
/// Clopper-Pearson bound of the rejection rate stays at or below 0.05.
#[test]
fn rank_test_level_with_large_ensemble() {
    let m = 2499;
    let cfg = TestConfig::new(SummaryKind::FTilde, m, 0.05).unwrap();
    let model = NullModel::new(256, RadiusGrid::default(), cfg.kind);
    let pool = simulate_null_ensemble(4000, &model, 21).unwrap().curves().to_vec();
    let outcomes: Vec<(bool, bool)> = (0..400u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(hash_seed(&[3, t]));
            let picked = sample(&mut rng, pool.len(), m + 1).into_vec();
            let observed = pool[picked[0]].clone();
            let curves = picked[1..].iter().map(|&i| pool[i].clone()).collect();
            let ensemble = NullEnsemble::from_curves(curves, t, model.clone()).unwrap();
            let o = TestKind::Rank.run(&observed, &ensemble, &cfg).unwrap();
            (o.reject, o.liberal_reject)
        })
        .collect();
    let conservative = outcomes.iter().filter(|o| o.0).count();
    let liberal = outcomes.iter().filter(|o| o.1).count();
    let (lo, _) = clopper_pearson(conservative as u64, 400, 0.99).unwrap();
    assert!(lo <= 0.05, "{conservative}/400");
    assert!(liberal >= conservative);
}

#[test]
fn adaptive_r0_on_noise_falls_back() {
    let x = white_noise(31, 0, 256, 1.0);
    let a = adaptive_r0(&x, 199, 5).unwrap();
    assert!(!a.detected);
    assert_eq!(a.r0, 0.8);
}

#[test]
fn adaptive_r0_on_strong_hermite_signal() {
    let s = make_signal("HermiteFunction", 512, &SignalParams::new()).unwrap();
    let x = add_noise_at_snr(&s, 30.0, 41).unwrap();
    let a = adaptive_r0(&x.samples, 199, 5).unwrap();
    assert!(a.detected);
    assert!((0.65..=1.05).contains(&a.r0), "{}", a.r0);
}

#[test]
fn realized_snr_concentrates() {
    let s = make_signal("LinearChirp", 1024, &SignalParams::new()).unwrap();
    let snrs: Vec<f64> = (0..200u64)
        .map(|r| {
            let x = add_noise_at_snr(&s, 10.0, hash_seed(&[4, r])).unwrap();
            10.0 * (s.energy() / x.noise.iter().map(|v| v * v).sum::<f64>()).log10()
        })
        .collect();
    let mean = snrs.iter().sum::<f64>() / 200.0;
    assert!((mean - 10.0).abs() <= 0.1, "{mean}");
}
