use std::collections::BTreeMap;
use std::f64::consts::PI;

use ndarray::Array2;
use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Named numeric parameters of a bank signal.
pub type SignalParams = BTreeMap<String, f64>;

/// Ground truth of the AM-FM components of a signal.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentInfo {
    /// `J x N` instantaneous frequencies in cycles/sample, NaN where inactive.
    pub inst_freq: Array2<f64>,
    /// Number of active components at each sample.
    pub components_per_time: Vec<usize>,
}

impl ComponentInfo {
    pub fn component_count(&self) -> usize {
        self.inst_freq.nrows()
    }
}

/// Real test signal with optional component metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub name: String,
    pub samples: Vec<f64>,
    /// `None` for signals of unknown structure, such as recordings.
    pub components: Option<ComponentInfo>,
}

impl Signal {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.energy().sqrt()
    }
}

/// Catalog entry of a bank signal.
#[derive(Debug, Clone, Serialize)]
pub struct SignalSpec {
    pub name: &'static str,
    pub description: &'static str,
    /// Component count with default parameters.
    pub components: usize,
    pub params: Vec<(&'static str, f64)>,
}

/// Every signal [`make_signal`] knows, with default parameters.
pub fn catalog() -> Vec<SignalSpec> {
    vec![
        SignalSpec {
            name: "LinearChirp",
            description: "linear chirp from f0 to f1",
            components: 1,
            params: vec![("f0", 0.1), ("f1", 0.4)],
        },
        SignalSpec {
            name: "CosChirp",
            description: "sinusoidal FM around fc with the given depth and number of cycles",
            components: 1,
            params: vec![("fc", 0.25), ("depth", 0.1), ("cycles", 1.0)],
        },
        SignalSpec {
            name: "McMultiLinear",
            description: "parallel linear chirps starting at f0, spaced by `spacing`, all rising by `slope`",
            components: 3,
            params: vec![("count", 3.0), ("f0", 0.05), ("spacing", 0.1), ("slope", 0.15)],
        },
        SignalSpec {
            name: "McTripleCosChirp",
            description: "three sinusoidal-FM chirps whose spacing grows from 30% at the left edge to `spacing` at the right",
            components: 3,
            params: vec![("spacing", 0.12), ("fc", 0.2), ("depth", 0.03)],
        },
        SignalSpec {
            name: "McImpulsesAndTone",
            description: "tone plus three short Gaussian-windowed impulses (only the tone is a tracked component)",
            components: 1,
            params: vec![("f", 0.3), ("impulse_width", 3.0), ("impulse_gain", 1.0)],
        },
        SignalSpec {
            name: "HermiteFunction",
            description: "Hermite function of the given order on a scale matched to a sqrt(N) window, modulated to `fc`",
            components: 1,
            params: vec![("order", 15.0), ("fc", 0.25)],
        },
        SignalSpec {
            name: "McCrossingChirps",
            description: "rising and falling linear chirps crossing at mid-signal",
            components: 2,
            params: vec![("f0", 0.1), ("f1", 0.4)],
        },
        SignalSpec {
            name: "McAmFmMixture",
            description: "four components: rising chirp, gated tone, AM sinusoidal FM and falling chirp",
            components: 4,
            params: vec![],
        },
    ]
}

/// Names of all bank signals.
pub fn signal_names() -> Vec<&'static str> {
    catalog().iter().map(|s| s.name).collect()
}

/// Cosine taper over the first and last 10% of `len` samples.
fn taper(i: usize, len: usize) -> f64 {
    let edge = ((len as f64) * 0.1).round().max(1.0);
    let i = i as f64;
    let from_end = (len - 1) as f64 - i;
    let d = i.min(from_end);
    if d >= edge {
        1.0
    } else {
        0.5 * (1.0 - (PI * (d + 0.5) / edge).cos())
    }
}

/// One AM-FM component active on `start..end`.
struct Component {
    start: usize,
    end: usize,
    /// Phase in cycles at sample `n`.
    phase: Box<dyn Fn(f64) -> f64>,
    /// Instantaneous frequency in cycles/sample.
    freq: Box<dyn Fn(f64) -> f64>,
    amplitude: Box<dyn Fn(f64) -> f64>,
}

impl Component {
    fn full(n: usize, phase: impl Fn(f64) -> f64 + 'static, freq: impl Fn(f64) -> f64 + 'static) -> Self {
        Self {
            start: 0,
            end: n,
            phase: Box::new(phase),
            freq: Box::new(freq),
            amplitude: Box::new(|_| 1.0),
        }
    }
}

fn assemble(name: &str, n: usize, comps: Vec<Component>, extra: Option<Vec<f64>>) -> Signal {
    let mut samples = extra.unwrap_or_else(|| vec![0.0; n]);
    let mut inst_freq = Array2::from_elem((comps.len(), n), f64::NAN);
    let mut per_time = vec![0usize; n];
    for (j, c) in comps.iter().enumerate() {
        let len = c.end - c.start;
        for i in 0..len {
            let t = (c.start + i) as f64;
            let a = (c.amplitude)(t) * taper(i, len);
            samples[c.start + i] += a * (2.0 * PI * (c.phase)(t)).cos();
            inst_freq[[j, c.start + i]] = (c.freq)(t);
            per_time[c.start + i] += 1;
        }
    }
    Signal {
        name: name.to_string(),
        samples,
        components: Some(ComponentInfo {
            inst_freq,
            components_per_time: per_time,
        }),
    }
}

/// Reads parameters against the defaults of `spec`, rejecting unknown keys.
fn resolve(spec: &SignalSpec, given: &SignalParams) -> Result<BTreeMap<&'static str, f64>> {
    let mut out: BTreeMap<&'static str, f64> = spec.params.iter().copied().collect();
    for (k, &v) in given {
        match spec.params.iter().find(|(name, _)| name == k) {
            Some((name, _)) => {
                if !v.is_finite() {
                    return Err(invalid(format!("{}: parameter `{k}` must be finite", spec.name)));
                }
                out.insert(name, v);
            }
            None => {
                let known: Vec<&str> = spec.params.iter().map(|p| p.0).collect();
                return Err(invalid(format!(
                    "{}: unknown parameter `{k}` (known: {})",
                    spec.name,
                    known.join(", ")
                )));
            }
        }
    }
    Ok(out)
}

fn check_band(name: &str, lo: f64, hi: f64) -> Result<()> {
    if lo < 0.0 || hi > 0.5 {
        return Err(invalid(format!(
            "{name}: instantaneous frequency range [{lo:.3}, {hi:.3}] leaves [0, 0.5]"
        )));
    }
    Ok(())
}

fn linear(n: usize, f0: f64, f1: f64) -> Component {
    let rate = (f1 - f0) / (n - 1) as f64;
    Component::full(n, move |t| f0 * t + 0.5 * rate * t * t, move |t| f0 + rate * t)
}

/// `f(t) = fc + depth sin(2 pi cycles t / (N-1))`.
fn sinusoidal_fm(n: usize, fc: f64, depth: f64, cycles: f64) -> Component {
    let w = 2.0 * PI * cycles / (n - 1) as f64;
    Component::full(
        n,
        move |t| fc * t + depth * (1.0 - (w * t).cos()) / w,
        move |t| fc + depth * (w * t).sin(),
    )
}

/// Orthonormal Hermite function `h_order(t)` by the three-term recurrence.
pub fn hermite_function(order: usize, t: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * t * t).exp();
    for k in 1..=order {
        let kf = k as f64;
        let next = (2.0 / kf).sqrt() * t * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Builds a bank signal of length `n`.
pub fn make_signal(name: &str, n: usize, params: &SignalParams) -> Result<Signal> {
    let spec = catalog().into_iter().find(|s| s.name == name).ok_or_else(|| Error::UnknownSignal {
        name: name.to_string(),
        available: signal_names().join(", "),
    })?;
    if n < 64 {
        return Err(invalid(format!("signal length must be at least 64, got {n}")));
    }
    let p = resolve(&spec, params)?;
    let nm = spec.name;
    match nm {
        "LinearChirp" => {
            let (f0, f1) = (p["f0"], p["f1"]);
            check_band(nm, f0.min(f1), f0.max(f1))?;
            Ok(assemble(nm, n, vec![linear(n, f0, f1)], None))
        }
        "CosChirp" => {
            let (fc, d) = (p["fc"], p["depth"]);
            check_band(nm, fc - d.abs(), fc + d.abs())?;
            Ok(assemble(nm, n, vec![sinusoidal_fm(n, fc, d, p["cycles"])], None))
        }
        "McMultiLinear" => {
            let count = p["count"].round();
            if !(1.0..=16.0).contains(&count) {
                return Err(invalid(format!("{nm}: count must be in 1..=16")));
            }
            let (f0, sp, slope) = (p["f0"], p["spacing"], p["slope"]);
            let top = f0 + sp * (count - 1.0);
            check_band(nm, f0.min(f0 + slope).min(top), (top + slope).max(top).max(f0))?;
            let comps = (0..count as usize)
                .map(|i| {
                    let a = f0 + sp * i as f64;
                    linear(n, a, a + slope)
                })
                .collect();
            Ok(assemble(nm, n, comps, None))
        }
        "McTripleCosChirp" => {
            let (sp, fc, depth) = (p["spacing"], p["fc"], p["depth"]);
            check_band(nm, fc - depth, fc + 2.0 * sp + depth)?;
            let last = (n - 1) as f64;
            let w = 2.0 * PI * 1.5 / last;
            let comps = (0..3)
                .map(|i| {
                    let off = i as f64 * sp;
                    Component::full(
                        n,
                        move |t| fc * t + off * (0.3 * t + 0.35 * t * t / last) + depth * (1.0 - (w * t).cos()) / w,
                        move |t| fc + off * (0.3 + 0.7 * t / last) + depth * (w * t).sin(),
                    )
                })
                .collect();
            Ok(assemble(nm, n, comps, None))
        }
        "McImpulsesAndTone" => {
            let f = p["f"];
            check_band(nm, f, f)?;
            let width = p["impulse_width"].max(0.5);
            let gain = p["impulse_gain"];
            let mut extra = vec![0.0; n];
            for center in [n / 4, n / 2, 3 * n / 4] {
                for (i, e) in extra.iter_mut().enumerate() {
                    let u = (i as f64 - center as f64) / width;
                    *e += gain * 4.0 * (-PI * u * u).exp();
                }
            }
            Ok(assemble(nm, n, vec![Component::full(n, move |t| f * t, move |_| f)], Some(extra)))
        }
        "HermiteFunction" => {
            let order = p["order"].round();
            if !(0.0..=200.0).contains(&order) {
                return Err(invalid(format!("{nm}: order must be in 0..=200")));
            }
            let fc = p["fc"];
            check_band(nm, fc, fc)?;
            let scale = (n as f64).sqrt() / (2.0 * PI).sqrt();
            let mid = (n - 1) as f64 / 2.0;
            let mut samples: Vec<f64> = (0..n)
                .map(|i| {
                    let c = i as f64 - mid;
                    hermite_function(order as usize, c / scale) * (2.0 * PI * fc * c).cos()
                })
                .collect();
            let norm = samples.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::ZeroEnergy);
            }
            samples.iter_mut().for_each(|v| *v /= norm);
            Ok(Signal {
                name: nm.to_string(),
                samples,
                components: Some(ComponentInfo {
                    inst_freq: Array2::from_elem((1, n), fc),
                    components_per_time: vec![1; n],
                }),
            })
        }
        "McCrossingChirps" => {
            let (f0, f1) = (p["f0"], p["f1"]);
            check_band(nm, f0.min(f1), f0.max(f1))?;
            Ok(assemble(nm, n, vec![linear(n, f0, f1), linear(n, f1, f0)], None))
        }
        "McAmFmMixture" => {
            let mut comps = vec![linear(n, 0.04, 0.12)];
            let (a, b) = (n / 4, 3 * n / 4);
            comps.push(Component {
                start: a,
                end: b,
                phase: Box::new(|t| 0.2 * t),
                freq: Box::new(|_| 0.2),
                amplitude: Box::new(|_| 1.0),
            });
            let mut am = sinusoidal_fm(n, 0.3, 0.03, 2.0);
            let w = 2.0 * PI * 2.0 / n as f64;
            am.amplitude = Box::new(move |t| 1.0 + 0.5 * (w * t).cos());
            comps.push(am);
            comps.push(linear(n, 0.45, 0.38));
            Ok(assemble(nm, n, comps, None))
        }
        _ => unreachable!("catalog and constructor disagree on {nm}"),
    }
}
