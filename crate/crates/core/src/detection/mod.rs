//! Monte Carlo detection tests on summary curves of spectrogram zeros.

mod adaptive;
mod ensemble;
mod montecarlo;

pub use adaptive::{adaptive_r0, adaptive_r0_with, AdaptiveConfig, AdaptiveR0, FALLBACK_R0};
pub use ensemble::{simulate_null_ensemble, EnsembleCache, NullEnsemble, NullModel};
pub use montecarlo::{
    envelope_test, global_ranks, lower_envelope, mad_test, rank_envelope_test, TestConfig, TestOutcome,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point_process::RadiusGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Envelope,
    Mad,
    Rank,
}

impl TestKind {
    pub const ALL: [TestKind; 3] = [TestKind::Envelope, TestKind::Mad, TestKind::Rank];

    pub fn name(self) -> &'static str {
        match self {
            TestKind::Envelope => "envelope",
            TestKind::Mad => "mad",
            TestKind::Rank => "rank",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown test `{s}`; expected envelope, mad or rank")))
    }

    /// Runs the test against a prepared ensemble.
    pub fn run(
        self,
        observed: &crate::point_process::SummaryCurve,
        ensemble: &NullEnsemble,
        cfg: &TestConfig,
    ) -> Result<TestOutcome> {
        match self {
            TestKind::Envelope => envelope_test(observed, ensemble, cfg),
            TestKind::Mad => mad_test(observed, ensemble, cfg),
            TestKind::Rank => rank_envelope_test(observed, ensemble, cfg),
        }
    }
}

/// End-to-end detection on the default radius grid; returns the decision.
pub fn detect_signal(x: &[f64], test: TestKind, cfg: &TestConfig, m: usize, seed: u64) -> Result<bool> {
    Ok(detect_with(x, test, cfg, m, seed, None)?.reject)
}

/// [`detect_signal`] returning the full outcome, optionally through a cache.
pub fn detect_with(
    x: &[f64],
    test: TestKind,
    cfg: &TestConfig,
    m: usize,
    seed: u64,
    cache: Option<&EnsembleCache>,
) -> Result<TestOutcome> {
    let model = NullModel::new(x.len(), RadiusGrid::default(), cfg.kind);
    let ensemble = match cache {
        Some(c) => c.get(m, &model, seed)?,
        None => std::sync::Arc::new(simulate_null_ensemble(m, &model, seed)?),
    };
    let observed = model.summarize(x)?;
    test.run(&observed, &ensemble, cfg)
}
