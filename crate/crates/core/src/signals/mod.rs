//! Synthetic test signals with ground truth, noise injection and WAV input.

mod bank;
mod noise;
mod wav;

pub use bank::{catalog, hermite_function, make_signal, signal_names, ComponentInfo, Signal, SignalParams, SignalSpec};
pub use noise::{add_noise_at_snr, noise_sigma, NoisySignal};
pub use wav::{load_wav, read_wav_samples, write_wav, WavFormat};
