use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use super::bank::Signal;
use crate::error::{Error, Result};

/// Sample encodings accepted by [`load_wav`] and produced by [`write_wav`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavFormat {
    Pcm16,
    Float32,
}

/// Raw mono samples and sample rate, without normalization.
pub fn read_wav_samples(path: impl AsRef<Path>) -> Result<(Vec<f64>, u32)> {
    let mut reader = WavReader::open(path)?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(Error::UnsupportedWav(format!(
            "expected mono, got {} channels",
            spec.channels
        )));
    }
    let samples = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<std::result::Result<Vec<_>, _>>()?,
        (SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<std::result::Result<Vec<_>, _>>()?,
        (fmt, bits) => {
            return Err(Error::UnsupportedWav(format!(
                "expected 16-bit PCM or 32-bit float, got {bits}-bit {fmt:?}"
            )))
        }
    };
    Ok((samples, spec.sample_rate))
}

/// Mono 16-bit PCM or 32-bit float WAV, scaled to unit energy.
/// Component metadata is unknown.
pub fn load_wav(path: impl AsRef<Path>) -> Result<Signal> {
    let path = path.as_ref();
    let (mut samples, _) = read_wav_samples(path)?;
    let norm = samples.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroEnergy);
    }
    samples.iter_mut().for_each(|v| *v /= norm);
    Ok(Signal {
        name: path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "wav".to_string()),
        samples,
        components: None,
    })
}

/// Writes mono samples. PCM16 values are clipped to `[-1, 1)`.
pub fn write_wav(path: impl AsRef<Path>, samples: &[f64], sample_rate: u32, format: WavFormat) -> Result<()> {
    let spec = WavSpec {
        channels: 1,
        sample_rate,
        bits_per_sample: if format == WavFormat::Pcm16 { 16 } else { 32 },
        sample_format: if format == WavFormat::Pcm16 {
            SampleFormat::Int
        } else {
            SampleFormat::Float
        },
    };
    let mut writer = WavWriter::create(path, spec)?;
    for &v in samples {
        match format {
            WavFormat::Pcm16 => writer.write_sample((v * 32768.0).round().clamp(-32768.0, 32767.0) as i16)?,
            WavFormat::Float32 => writer.write_sample(v as f32)?,
        }
    }
    writer.finalize()?;
    Ok(())
}
