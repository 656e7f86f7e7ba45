use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::config::{ParamSet, Task};
use crate::denoise::{
    dt_denoise, empty_space_denoise, sst_rd_denoise_with, threshold_denoise, Setting, ThresholdRule, GARROTE_C,
    HARD_C, RIDGE_MU,
};
use crate::detection::{detect_with, EnsembleCache, TestConfig, TestKind};
use crate::error::{Error, Result};
use crate::point_process::SummaryKind;
use crate::signals::Signal;

/// Seed of the null ensembles used by the built-in adapters.
pub const DEFAULT_NULL_SEED: u64 = 0x5EED;
/// Default number of null simulations.
pub const DEFAULT_M: usize = 199;

/// What a method returns for one noisy observation.
#[derive(Debug, Clone, PartialEq)]
pub enum MethodOutput {
    Denoised(Vec<f64>),
    Detected(bool),
}

type AdapterFn = dyn Fn(&[f64], &Signal, &ParamSet, u64) -> Result<MethodOutput> + Send + Sync;

/// A named method callable on `(noisy samples, clean signal, parameters, seed)`.
#[derive(Clone)]
pub struct MethodAdapter {
    pub name: String,
    pub task: Task,
    pub description: String,
    /// Run outside the worker pool, one call at a time.
    pub serial_only: bool,
    run: Arc<AdapterFn>,
}

impl fmt::Debug for MethodAdapter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MethodAdapter")
            .field("name", &self.name)
            .field("task", &self.task)
            .field("serial_only", &self.serial_only)
            .finish()
    }
}

impl MethodAdapter {
    pub fn new(
        name: impl Into<String>,
        task: Task,
        description: impl Into<String>,
        run: impl Fn(&[f64], &Signal, &ParamSet, u64) -> Result<MethodOutput> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            task,
            description: description.into(),
            serial_only: false,
            run: Arc::new(run),
        }
    }

    pub fn serial(mut self) -> Self {
        self.serial_only = true;
        self
    }

    /// Runs the method and checks the output shape against the task.
    pub fn call(&self, x: &[f64], clean: &Signal, params: &ParamSet, seed: u64) -> Result<MethodOutput> {
        let out = (self.run)(x, clean, params, seed)?;
        match (&out, self.task) {
            (MethodOutput::Denoised(y), Task::Denoising) if y.len() == x.len() => Ok(out),
            (MethodOutput::Denoised(y), Task::Denoising) => Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            }),
            (MethodOutput::Detected(_), Task::Detection) => Ok(out),
            _ => Err(Error::KindMismatch {
                expected: self.task.name(),
                actual: match out {
                    MethodOutput::Denoised(_) => "denoising",
                    MethodOutput::Detected(_) => "detection",
                },
            }),
        }
    }
}

/// Parameter lookup with defaults that rejects unknown keys.
struct Params<'a> {
    given: &'a ParamSet,
}

impl<'a> Params<'a> {
    fn new(method: &str, given: &'a ParamSet, allowed: &[&str]) -> Result<Self> {
        if let Some(k) = given.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidParameter(format!(
                "{method}: unknown parameter `{k}` (allowed: {})",
                allowed.join(", ")
            )));
        }
        Ok(Self { given })
    }

    fn get(&self, key: &str, default: f64) -> f64 {
        self.given.get(key).copied().unwrap_or(default)
    }

    fn setting(&self, key: &str) -> Setting {
        self.given.get(key).map_or(Setting::Auto, |&v| Setting::Fixed(v))
    }

    fn count(&self, key: &str, default: usize) -> Result<usize> {
        let v = self.get(key, default as f64);
        if v < 0.0 || v.fract() != 0.0 {
            return Err(Error::InvalidParameter(format!("`{key}` must be a non-negative integer, got {v}")));
        }
        Ok(v as usize)
    }

    fn seed(&self) -> u64 {
        self.given.get("null_seed").map_or(DEFAULT_NULL_SEED, |&v| v as u64)
    }
}

fn threshold_method(name: &str, rule: ThresholdRule, c: f64, description: &str) -> MethodAdapter {
    let n = name.to_string();
    MethodAdapter::new(name, Task::Denoising, description, move |x, _, p, _| {
        let p = Params::new(&n, p, &["c"])?;
        threshold_denoise(x, rule, p.get("c", c)).map(MethodOutput::Denoised)
    })
}

fn detection_method(kind: TestKind, description: &str) -> MethodAdapter {
    MethodAdapter::new(kind.name(), Task::Detection, description, move |x, _, p, _| {
        let p = Params::new(kind.name(), p, &["m", "alpha", "stabilized", "null_seed"])?;
        let m = p.count("m", DEFAULT_M)?;
        let summary = if p.get("stabilized", 1.0) != 0.0 {
            SummaryKind::FTilde
        } else {
            SummaryKind::F
        };
        let cfg = TestConfig::new(summary, m, p.get("alpha", 0.05))?;
        let outcome = detect_with(x, kind, &cfg, m, p.seed(), Some(EnsembleCache::global()))?;
        Ok(MethodOutput::Detected(outcome.reject))
    })
}

/// Every method shipped with the crate.
pub fn builtin_methods() -> Vec<MethodAdapter> {
    vec![
        MethodAdapter::new("identity", Task::Denoising, "returns the noisy input", |x, _, p, _| {
            Params::new("identity", p, &[])?;
            Ok(MethodOutput::Denoised(x.to_vec()))
        }),
        threshold_method("hard", ThresholdRule::Hard, HARD_C, "hard STFT thresholding at c * sigma_hat (c = 3)"),
        threshold_method(
            "garrote",
            ThresholdRule::Garrote,
            GARROTE_C,
            "garrote STFT thresholding at c * sigma_hat (c = 2)",
        ),
        MethodAdapter::new(
            "empty_space",
            Task::Denoising,
            "union of zero-free balls of radius r0 (auto: adaptive r0)",
            |x, _, p, _| {
                let p = Params::new("empty_space", p, &["r0", "m", "null_seed"])?;
                let out = empty_space_denoise(x, p.setting("r0"), p.count("m", DEFAULT_M)?, p.seed())?;
                Ok(MethodOutput::Denoised(out.s_hat))
            },
        ),
        MethodAdapter::new(
            "delaunay",
            Task::Denoising,
            "Delaunay triangles of the zeros with an edge longer than l_max (auto: 2 r0)",
            |x, _, p, _| {
                let p = Params::new("delaunay", p, &["l_max", "m", "null_seed"])?;
                let out = dt_denoise(x, p.setting("l_max"), p.count("m", DEFAULT_M)?, p.seed())?;
                Ok(MethodOutput::Denoised(out.s_hat))
            },
        ),
        MethodAdapter::new(
            "sst_rd",
            Task::Denoising,
            "synchrosqueezing with ridge extraction (j: component count, eps: band)",
            |x, clean, p, _| {
                let p = Params::new("sst_rd", p, &["j", "eps", "mu"])?;
                let known = clean.components.as_ref().map_or(1, |c| c.component_count().max(1));
                let j = p.count("j", known)?;
                let eps = match p.given.get("eps") {
                    Some(_) => Some(p.count("eps", 0)?),
                    None => None,
                };
                let out = sst_rd_denoise_with(x, j, eps, p.get("mu", RIDGE_MU))?;
                Ok(MethodOutput::Denoised(out.s_hat))
            },
        ),
        detection_method(TestKind::Envelope, "envelope test on the empty space function, k = alpha (m + 1)"),
        detection_method(TestKind::Mad, "maximum absolute deviation test, k = alpha (m + 1)"),
        detection_method(TestKind::Rank, "global rank envelope test, conservative decision"),
    ]
}

/// Looks up a built-in method by name.
pub fn find_method(name: &str) -> Result<MethodAdapter> {
    builtin_methods()
        .into_iter()
        .find(|m| m.name == name)
        .ok_or_else(|| Error::UnknownMethod {
            name: name.to_string(),
            available: method_names().join(", "),
        })
}

pub fn method_names() -> Vec<String> {
    builtin_methods().into_iter().map(|m| m.name).collect()
}

/// Built-in methods grouped by task.
pub fn methods_by_task() -> BTreeMap<&'static str, Vec<String>> {
    let mut out: BTreeMap<&'static str, Vec<String>> = BTreeMap::new();
    for m in builtin_methods() {
        out.entry(m.task.name()).or_default().push(m.name);
    }
    out
}
