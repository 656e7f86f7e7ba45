use super::bank::Signal;
use crate::error::{Error, Result};
use crate::rng::white_noise;

/// Clean signal plus one white Gaussian noise realization.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisySignal {
    pub samples: Vec<f64>,
    pub clean: Signal,
    pub noise: Vec<f64>,
    pub target_snr_db: f64,
    pub seed: u64,
}

/// Per-sample noise deviation giving `snr_db` for a signal of energy `energy`.
pub fn noise_sigma(energy: f64, n: usize, snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        return 0.0;
    }
    energy.sqrt() / ((n as f64).sqrt() * 10f64.powf(snr_db / 20.0))
}

/// Adds real white Gaussian noise with `sigma = |s| / (sqrt(N) 10^(snr/20))`.
///
/// `snr_db = +inf` adds nothing.
pub fn add_noise_at_snr(s: &Signal, snr_db: f64, seed: u64) -> Result<NoisySignal> {
    let energy = s.energy();
    if !(energy > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::InvalidParameter(format!("invalid SNR {snr_db}")));
    }
    let sigma = noise_sigma(energy, s.len(), snr_db);
    let noise = if sigma == 0.0 {
        vec![0.0; s.len()]
    } else {
        white_noise(seed, 0, s.len(), sigma)
    };
    let samples = s.samples.iter().zip(&noise).map(|(a, b)| a + b).collect();
    Ok(NoisySignal {
        samples,
        clean: s.clone(),
        noise,
        target_snr_db: snr_db,
        seed,
    })
}
