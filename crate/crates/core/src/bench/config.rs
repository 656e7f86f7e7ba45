use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signals::SignalParams;

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "TFZEROS_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Denoising,
    Detection,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Denoising => "denoising",
            Task::Detection => "detection",
        }
    }
}

/// Numeric parameters of one method invocation.
pub type ParamSet = BTreeMap<String, f64>;

/// Benchmark description, usually read from TOML.
///
/// ```toml
/// task = "denoising"
/// signals = ["LinearChirp", "McCrossingChirps"]
/// n = 256
/// snr_db = [0.0, 10.0]
/// repetitions = 3
/// base_seed = 42
/// metrics = ["qrf", "cc"]
///
/// [signal_params.LinearChirp]
/// f1 = 0.3
///
/// [methods]
/// hard = [{ c = 3.0 }, { c = 2.5 }]
/// empty_space = [{}]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub task: Task,
    pub signals: Vec<String>,
    #[serde(default)]
    pub signal_params: BTreeMap<String, SignalParams>,
    pub n: usize,
    pub snr_db: Vec<f64>,
    pub repetitions: usize,
    #[serde(default)]
    pub base_seed: u64,
    /// Worker threads; `None` uses every available core.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Parameter sets per method; an empty list runs the defaults once.
    pub methods: BTreeMap<String, Vec<ParamSet>>,
    /// Metric names; empty selects the defaults of the task.
    #[serde(default)]
    pub metrics: Vec<String>,
}

impl BenchmarkConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.repetitions == 0 {
            return fail("repetitions must be at least 1".into());
        }
        if self.snr_db.is_empty() {
            return fail("snr_db must not be empty".into());
        }
        if let Some(s) = self.snr_db.iter().find(|s| s.is_nan() || **s == f64::NEG_INFINITY) {
            return fail(format!("invalid SNR {s}"));
        }
        if self.signals.is_empty() {
            return fail("signals must not be empty".into());
        }
        if self.methods.is_empty() {
            return fail("at least one method is required".into());
        }
        if self.workers == Some(0) {
            return fail("workers must be at least 1".into());
        }
        if let Some(name) = self.signal_params.keys().find(|k| !self.signals.contains(k)) {
            return fail(format!("signal_params given for unused signal `{name}`"));
        }
        Ok(())
    }

    /// `TFZEROS_WORKERS`, then `workers`, then the available parallelism.
    pub fn effective_workers(&self) -> Result<usize> {
        if let Ok(v) = std::env::var(WORKERS_ENV) {
            return match v.trim().parse::<usize>() {
                Ok(w) if w > 0 => Ok(w),
                _ => Err(Error::Config(format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))),
            };
        }
        Ok(self
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())))
    }

    /// Parameter sets of `method`, with an empty list standing for one default set.
    pub fn param_sets(&self, method: &str) -> Vec<ParamSet> {
        match self.methods.get(method) {
            Some(sets) if !sets.is_empty() => sets.clone(),
            _ => vec![ParamSet::new()],
        }
    }
}
