//! Planar point patterns of spectrogram zeros and their summary functions.

mod index;
mod plane;
mod summary;

pub use index::{mean_nearest_neighbor_distance, nearest_distance, PointIndex};
pub use plane::{scale_zeros, PlanarPointSet, PlaneScale, Rect};
pub use summary::{
    empty_space_estimate, reference_lattice, variance_stabilize, RadiusGrid, SummaryCurve, SummaryKind,
    DEFAULT_REF_DENSITY,
};

use crate::error::Result;
use crate::tf::{real_band_zeros, TfParams};

/// Zeros of a real signal, mapped to the plane.
pub fn signal_zeros(x: &[f64], params: &TfParams) -> Result<PlanarPointSet> {
    let zeros = real_band_zeros(x, params)?;
    scale_zeros(&zeros, &PlaneScale::from_params(params))
}

/// Summary curve of the zeros of a real signal.
pub fn signal_summary(
    x: &[f64],
    params: &TfParams,
    radii: &RadiusGrid,
    kind: SummaryKind,
    ref_density: f64,
) -> Result<SummaryCurve> {
    let pts = signal_zeros(x, params)?;
    let f = empty_space_estimate(&pts, radii, ref_density)?;
    match kind {
        SummaryKind::F => Ok(f),
        SummaryKind::FTilde => variance_stabilize(&f),
    }
}
