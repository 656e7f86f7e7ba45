//! Benchmark engine: configured methods on noisy bank signals, with paired
//! noise realizations and per-call metrics.

mod config;
mod engine;
mod methods;
mod metrics;

pub use config::{BenchmarkConfig, ParamSet, Task, WORKERS_ENV};
pub use engine::{noise_seed, run_benchmark, run_config, ResultRow, ResultsTable};
pub use methods::{
    builtin_methods, find_method, method_names, methods_by_task, MethodAdapter, MethodOutput, DEFAULT_M,
    DEFAULT_NULL_SEED,
};
pub use metrics::{
    builtin_metrics, corr_coeff, corr_coeff_complex, default_metrics, find_metric, qrf, Metric, QRF_CAP_DB,
};
