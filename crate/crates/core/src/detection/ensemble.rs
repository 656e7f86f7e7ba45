use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::point_process::{signal_summary, RadiusGrid, SummaryCurve, SummaryKind, DEFAULT_REF_DENSITY};
use crate::rng::white_noise;
use crate::tf::TfParams;

/// Everything that determines how a signal is turned into a summary curve.
#[derive(Debug, Clone, PartialEq)]
pub struct NullModel {
    pub signal_len: usize,
    pub tf: TfParams,
    pub radii: RadiusGrid,
    pub kind: SummaryKind,
    pub ref_density: f64,
}

impl NullModel {
    /// Default analysis (`K = N`, `T = sqrt(N)`) and reference density.
    pub fn new(signal_len: usize, radii: RadiusGrid, kind: SummaryKind) -> Self {
        Self {
            signal_len,
            tf: TfParams::for_length(signal_len),
            radii,
            kind,
            ref_density: DEFAULT_REF_DENSITY,
        }
    }

    /// Summary curve of `x` under this model.
    pub fn summarize(&self, x: &[f64]) -> Result<SummaryCurve> {
        if x.len() != self.signal_len {
            return Err(crate::Error::LengthMismatch {
                left: self.signal_len,
                right: x.len(),
            });
        }
        signal_summary(x, &self.tf, &self.radii, self.kind, self.ref_density)
    }

    fn cache_key(&self, m: usize, seed: u64) -> String {
        format!("{self:?}|{m}|{seed}")
    }
}

/// Summary curves of `m` independent white-noise realizations.
#[derive(Debug, Clone)]
pub struct NullEnsemble {
    curves: Vec<SummaryCurve>,
    seed: u64,
    model: NullModel,
}

impl NullEnsemble {
    pub fn from_curves(curves: Vec<SummaryCurve>, seed: u64, model: NullModel) -> Result<Self> {
        if curves.is_empty() {
            return Err(invalid("ensemble needs at least one curve"));
        }
        if curves
            .iter()
            .any(|c| c.radii() != &model.radii || c.kind() != model.kind)
        {
            return Err(invalid("ensemble curves must share the model's radii and kind"));
        }
        Ok(Self { curves, seed, model })
    }

    pub fn curves(&self) -> &[SummaryCurve] {
        &self.curves
    }

    pub fn m(&self) -> usize {
        self.curves.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn model(&self) -> &NullModel {
        &self.model
    }
}

/// Realization `j` (1-based) draws unit-variance noise from stream `j` of `seed`.
/// Realizations are computed in parallel and stored by index.
pub fn simulate_null_ensemble(m: usize, model: &NullModel, seed: u64) -> Result<NullEnsemble> {
    simulate(m, model, seed, true)
}

fn simulate(m: usize, model: &NullModel, seed: u64, parallel: bool) -> Result<NullEnsemble> {
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    model.tf.check(model.signal_len)?;
    let one = |j: u64| model.summarize(&white_noise(seed, j, model.signal_len, 1.0));
    let curves = if parallel {
        (1..=m as u64).into_par_iter().map(one).collect::<Result<Vec<_>>>()?
    } else {
        (1..=m as u64).map(one).collect::<Result<Vec<_>>>()?
    };
    NullEnsemble::from_curves(curves, seed, model.clone())
}

type Slot = Arc<Mutex<Option<Arc<NullEnsemble>>>>;

/// Memoizes ensembles by `(model, m, seed)`.
///
/// Concurrent requests for the same key wait for a single simulation.
#[derive(Debug, Default)]
pub struct EnsembleCache {
    slots: Mutex<HashMap<String, Slot>>,
}

impl EnsembleCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide cache used by the benchmark adapters.
    pub fn global() -> &'static EnsembleCache {
        static CACHE: OnceLock<EnsembleCache> = OnceLock::new();
        CACHE.get_or_init(EnsembleCache::new)
    }

    pub fn get(&self, m: usize, model: &NullModel, seed: u64) -> Result<Arc<NullEnsemble>> {
        let slot = {
            let mut slots = self.slots.lock().expect("cache poisoned");
            slots.entry(model.cache_key(m, seed)).or_default().clone()
        };
        let mut guard = slot.lock().expect("cache slot poisoned");
        if let Some(e) = guard.as_ref() {
            return Ok(e.clone());
        }
        // no work stealing while the slot is held
        let e = Arc::new(simulate(m, model, seed, rayon::current_thread_index().is_none())?);
        *guard = Some(e.clone());
        Ok(e)
    }

    pub fn len(&self) -> usize {
        self.slots.lock().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.slots.lock().expect("cache poisoned").clear();
    }
}
