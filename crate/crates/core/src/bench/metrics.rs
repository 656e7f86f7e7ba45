use num_complex::Complex;

use super::config::Task;
use super::methods::MethodOutput;
use crate::error::{Error, Result};
use crate::signals::Signal;

/// QRF returned for exact reconstruction.
pub const QRF_CAP_DB: f64 = 300.0;

/// `10 log10(|s|^2 / |s - s_hat|^2)`, capped at [`QRF_CAP_DB`].
pub fn qrf(clean: &[f64], estimate: &[f64]) -> Result<f64> {
    if clean.len() != estimate.len() {
        return Err(Error::LengthMismatch {
            left: clean.len(),
            right: estimate.len(),
        });
    }
    let signal: f64 = clean.iter().map(|v| v * v).sum();
    if !(signal > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    let err: f64 = clean.iter().zip(estimate).map(|(a, b)| (a - b) * (a - b)).sum();
    if err == 0.0 {
        return Ok(QRF_CAP_DB);
    }
    Ok((10.0 * (signal / err).log10()).min(QRF_CAP_DB))
}

/// Correlation coefficient `<s, s_hat> / (|s| |s_hat|)` of complex signals.
///
/// Returns the complex value; callers take the real part or the modulus.
/// A zero-norm estimate gives 0.
pub fn corr_coeff_complex(clean: &[Complex<f64>], estimate: &[Complex<f64>]) -> Result<Complex<f64>> {
    if clean.len() != estimate.len() {
        return Err(Error::LengthMismatch {
            left: clean.len(),
            right: estimate.len(),
        });
    }
    let ns = clean.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if !(ns > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    let ne = estimate.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if ne == 0.0 {
        return Ok(Complex::new(0.0, 0.0));
    }
    let inner: Complex<f64> = clean.iter().zip(estimate).map(|(a, b)| a * b.conj()).sum();
    Ok(inner / (ns * ne))
}

/// Real part of [`corr_coeff_complex`] for real signals.
pub fn corr_coeff(clean: &[f64], estimate: &[f64]) -> Result<f64> {
    let lift = |x: &[f64]| x.iter().map(|&v| Complex::new(v, 0.0)).collect::<Vec<_>>();
    Ok(corr_coeff_complex(&lift(clean), &lift(estimate))?.re)
}

type MetricFn = fn(&Signal, &MethodOutput, &[f64]) -> Result<f64>;

/// A named function of `(clean signal, method output, noise realization)`.
#[derive(Debug, Clone, Copy)]
pub struct Metric {
    pub name: &'static str,
    pub task: Task,
    pub description: &'static str,
    eval: MetricFn,
}

impl Metric {
    pub fn eval(&self, clean: &Signal, output: &MethodOutput, noise: &[f64]) -> Result<f64> {
        (self.eval)(clean, output, noise)
    }
}

fn denoised(output: &MethodOutput) -> Result<&[f64]> {
    match output {
        MethodOutput::Denoised(y) => Ok(y),
        MethodOutput::Detected(_) => Err(Error::KindMismatch {
            expected: "denoising",
            actual: "detection",
        }),
    }
}

/// Every metric shipped with the crate.
pub fn builtin_metrics() -> Vec<Metric> {
    vec![
        Metric {
            name: "qrf",
            task: Task::Denoising,
            description: "output SNR in dB, capped at 300",
            eval: |s, o, _| qrf(&s.samples, denoised(o)?),
        },
        Metric {
            name: "cc",
            task: Task::Denoising,
            description: "correlation coefficient (real part)",
            eval: |s, o, _| corr_coeff(&s.samples, denoised(o)?),
        },
        Metric {
            name: "cc_abs",
            task: Task::Denoising,
            description: "correlation coefficient (modulus)",
            eval: |s, o, _| corr_coeff(&s.samples, denoised(o)?).map(f64::abs),
        },
        Metric {
            name: "snr_gain",
            task: Task::Denoising,
            description: "QRF minus the realized input SNR, in dB",
            eval: |s, o, noise| {
                let noisy: Vec<f64> = s.samples.iter().zip(noise).map(|(a, b)| a + b).collect();
                Ok(qrf(&s.samples, denoised(o)?)? - qrf(&s.samples, &noisy)?)
            },
        },
        Metric {
            name: "detected",
            task: Task::Detection,
            description: "1 when H0 is rejected, 0 otherwise; its mean is the detection power",
            eval: |_, o, _| match o {
                MethodOutput::Detected(d) => Ok(f64::from(u8::from(*d))),
                MethodOutput::Denoised(_) => Err(Error::KindMismatch {
                    expected: "detection",
                    actual: "denoising",
                }),
            },
        },
    ]
}

/// Default metric names of a task.
pub fn default_metrics(task: Task) -> Vec<&'static str> {
    match task {
        Task::Denoising => vec!["qrf", "cc"],
        Task::Detection => vec!["detected"],
    }
}

pub fn find_metric(name: &str) -> Result<Metric> {
    builtin_metrics()
        .into_iter()
        .find(|m| m.name == name)
        .ok_or_else(|| Error::UnknownMetric(name.to_string()))
}
