//! Time-frequency detection and denoising built on spectrogram zeros.
//!
//! The transform kernels in [`tf`] are generic over [`Real`] (`f32` or
//! `f64`). Everything downstream of zero extraction works in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod denoise;
pub mod detection;
pub mod error;
pub mod geometry;
pub mod point_process;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod signals;
pub mod stats;
pub mod tf;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision STFT grid.
pub type StftGrid64 = tf::StftGrid<f64>;
/// Single-precision STFT grid.
pub type StftGrid32 = tf::StftGrid<f32>;
pub type Spectrogram64 = tf::Spectrogram<f64>;
pub type Spectrogram32 = tf::Spectrogram<f32>;
pub type Window64 = tf::AnalysisWindow<f64>;
pub type Window32 = tf::AnalysisWindow<f32>;
