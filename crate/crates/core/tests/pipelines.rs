//! End-to-end denoising runs on bank signals.

use tfzeros::bench::{corr_coeff, qrf, DEFAULT_M, DEFAULT_NULL_SEED};
use tfzeros::denoise::{dt_denoise, sst_rd_denoise, Setting};
use tfzeros::rng::hash_seed;
use tfzeros::signals::{add_noise_at_snr, make_signal, SignalParams};

#[test]
fn delaunay_improves_two_chirps_at_20_db() {
    let p: SignalParams = [("count", 2.0), ("f0", 0.1), ("spacing", 0.2), ("slope", 0.1)]
        .iter()
        .map(|&(k, v)| (k.to_string(), v))
        .collect();
    let s = make_signal("McMultiLinear", 1024, &p).unwrap();
    let x = add_noise_at_snr(&s, 20.0, 17).unwrap();
    let out = dt_denoise(&x.samples, Setting::Auto, DEFAULT_M, DEFAULT_NULL_SEED).unwrap();
    let gain = qrf(&s.samples, &out.s_hat).unwrap() - 20.0;
    assert!(gain > 0.0, "gain {gain}");
    assert!(out.parameter > 0.0);
}

#[test]
fn synchrosqueezing_recovers_a_chirp_at_10_db() {
    let s = make_signal("LinearChirp", 512, &SignalParams::new()).unwrap();
    let cc: Vec<f64> = (0..20u64)
        .map(|r| {
            let x = add_noise_at_snr(&s, 10.0, hash_seed(&[9, r])).unwrap();
            corr_coeff(&s.samples, &sst_rd_denoise(&x.samples, 1, None).unwrap().s_hat).unwrap()
        })
        .collect();
    let mean = cc.iter().sum::<f64>() / cc.len() as f64;
    assert!(mean > 0.8, "mean CC {mean}");
}
