use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{BenchmarkConfig, ParamSet};
use super::methods::{find_method, MethodAdapter, MethodOutput};
use super::metrics::{default_metrics, find_metric, Metric};
use crate::error::{Error, Result};
use crate::rng::hash_seed;
use crate::signals::{add_noise_at_snr, make_signal, Signal, SignalParams};

/// One metric value of one method call.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub method: String,
    pub param_set_id: usize,
    pub signal: String,
    pub snr_db: f64,
    pub repetition: usize,
    pub metric: String,
    /// NaN when the method or the metric failed.
    pub value: f64,
    pub runtime_s: f64,
    pub error: Option<String>,
}

impl ResultRow {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.method
            .cmp(&other.method)
            .then(self.param_set_id.cmp(&other.param_set_id))
            .then(self.signal.cmp(&other.signal))
            .then(self.snr_db.total_cmp(&other.snr_db))
            .then(self.repetition.cmp(&other.repetition))
            .then(self.metric.cmp(&other.metric))
    }

    /// Equality of every field except the runtime, with NaN equal to NaN.
    pub fn same_result(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
            && (self.value.to_bits() == other.value.to_bits() || (self.value.is_nan() && other.value.is_nan()))
    }
}

/// Rows sorted by `(method, param_set_id, signal, snr_db, repetition, metric)`.
#[derive(Debug, Clone, Default)]
pub struct ResultsTable {
    rows: Vec<ResultRow>,
}

impl ResultsTable {
    pub fn new(mut rows: Vec<ResultRow>) -> Self {
        rows.sort_by(ResultRow::key_cmp);
        Self { rows }
    }

    pub fn rows(&self) -> &[ResultRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &ResultRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }

    /// Row-by-row [`ResultRow::same_result`].
    pub fn same_results(&self, other: &ResultsTable) -> bool {
        self.len() == other.len() && self.rows.iter().zip(&other.rows).all(|(a, b)| a.same_result(b))
    }
}

/// Seed of the noise realization of one `(signal, snr, repetition)` cell.
pub fn noise_seed(base_seed: u64, signal: usize, snr: usize, repetition: usize) -> u64 {
    hash_seed(&[base_seed, signal as u64, snr as u64, repetition as u64])
}

/// Resolves the configured methods and metrics and runs the benchmark.
pub fn run_config(cfg: &BenchmarkConfig) -> Result<ResultsTable> {
    let methods = cfg.methods.keys().map(|m| find_method(m)).collect::<Result<Vec<_>>>()?;
    let names: Vec<&str> = if cfg.metrics.is_empty() {
        default_metrics(cfg.task)
    } else {
        cfg.metrics.iter().map(String::as_str).collect()
    };
    let metrics = names.into_iter().map(find_metric).collect::<Result<Vec<_>>>()?;
    run_benchmark(cfg, &methods, &metrics)
}

struct Plan<'a> {
    cfg: &'a BenchmarkConfig,
    signals: Vec<Signal>,
    metrics: &'a [Metric],
}

impl Plan<'_> {
    fn cell(&self, (sig, snr, rep): (usize, usize, usize), methods: &[(&MethodAdapter, Vec<ParamSet>)]) -> Vec<ResultRow> {
        let clean = &self.signals[sig];
        let snr_db = self.cfg.snr_db[snr];
        let seed = noise_seed(self.cfg.base_seed, sig, snr, rep);
        let noisy = add_noise_at_snr(clean, snr_db, seed);
        let mut rows = Vec::new();
        for (method, sets) in methods {
            for (pid, params) in sets.iter().enumerate() {
                let start = Instant::now();
                let output: Result<MethodOutput> = match &noisy {
                    Ok(x) => method.call(&x.samples, clean, params, seed),
                    Err(e) => Err(Error::InvalidParameter(format!("noise generation failed: {e}"))),
                };
                let runtime_s = start.elapsed().as_secs_f64();
                if let Err(e) = &output {
                    log::warn!("{} #{pid} on {} at {snr_db} dB, rep {rep}: {e}", method.name, clean.name);
                }
                for metric in self.metrics {
                    let value = match (&output, &noisy) {
                        (Ok(out), Ok(x)) => metric.eval(clean, out, &x.noise),
                        (Err(e), _) => Err(Error::InvalidParameter(e.to_string())),
                        (_, Err(e)) => Err(Error::InvalidParameter(e.to_string())),
                    };
                    let (value, error) = match value {
                        Ok(v) => (v, None),
                        Err(e) => (f64::NAN, Some(e.to_string())),
                    };
                    rows.push(ResultRow {
                        method: method.name.clone(),
                        param_set_id: pid,
                        signal: clean.name.clone(),
                        snr_db,
                        repetition: rep,
                        metric: metric.name.to_string(),
                        value,
                        runtime_s,
                        error,
                    });
                }
            }
        }
        rows
    }
}

/// Runs every method and parameter set on the same noisy realization of each
/// `(signal, snr, repetition)` cell and evaluates every metric.
///
/// Method and metric failures become NaN rows. Cells run on a pool of
/// [`BenchmarkConfig::effective_workers`] threads; serial-only methods run
/// afterwards on the calling thread.
pub fn run_benchmark(cfg: &BenchmarkConfig, methods: &[MethodAdapter], metrics: &[Metric]) -> Result<ResultsTable> {
    cfg.validate()?;
    if methods.is_empty() || metrics.is_empty() {
        return Err(Error::Config("need at least one method and one metric".into()));
    }
    if let Some(m) = methods.iter().find(|m| m.task != cfg.task) {
        return Err(Error::Config(format!("method `{}` is not a {} method", m.name, cfg.task.name())));
    }
    if let Some(m) = metrics.iter().find(|m| m.task != cfg.task) {
        return Err(Error::Config(format!("metric `{}` is not a {} metric", m.name, cfg.task.name())));
    }
    let empty = SignalParams::new();
    let signals = cfg
        .signals
        .iter()
        .map(|name| make_signal(name, cfg.n, cfg.signal_params.get(name).unwrap_or(&empty)))
        .collect::<Result<Vec<_>>>()?;
    let plan = Plan { cfg, signals, metrics };

    let cells: Vec<(usize, usize, usize)> = (0..cfg.signals.len())
        .flat_map(|s| (0..cfg.snr_db.len()).flat_map(move |q| (0..cfg.repetitions).map(move |r| (s, q, r))))
        .collect();
    let (serial, parallel): (Vec<_>, Vec<_>) = methods
        .iter()
        .map(|m| (m, cfg.param_sets(&m.name)))
        .partition(|(m, _)| m.serial_only);

    let workers = cfg.effective_workers()?;
    log::info!(
        "{} cells x {} methods on {workers} workers",
        cells.len(),
        methods.len()
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let mut rows: Vec<ResultRow> = if parallel.is_empty() {
        Vec::new()
    } else {
        pool.install(|| cells.par_iter().flat_map_iter(|&c| plan.cell(c, &parallel)).collect())
    };
    if !serial.is_empty() {
        rows.extend(cells.iter().flat_map(|&c| plan.cell(c, &serial)));
    }
    Ok(ResultsTable::new(rows))
}
