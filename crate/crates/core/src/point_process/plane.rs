use crate::error::{invalid, Result};
use crate::tf::{GridZeroSet, TfParams};

/// Axis-aligned observation window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Rect {
    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Result<Self> {
        if !(u_max > u_min && v_max > v_min) {
            return Err(invalid(format!(
                "window [{u_min}, {u_max}] x [{v_min}, {v_max}] has no area"
            )));
        }
        Ok(Self {
            u_min,
            u_max,
            v_min,
            v_max,
        })
    }

    pub fn width(&self) -> f64 {
        self.u_max - self.u_min
    }

    pub fn height(&self) -> f64 {
        self.v_max - self.v_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// Closed containment.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.u_min && p[0] <= self.u_max && p[1] >= self.v_min && p[1] <= self.v_max
    }

    /// Distance from an inside point to the window boundary.
    pub fn border_distance(&self, p: [f64; 2]) -> f64 {
        (p[0] - self.u_min)
            .min(self.u_max - p[0])
            .min(p[1] - self.v_min)
            .min(self.v_max - p[1])
    }

    pub fn translated(&self, du: f64, dv: f64) -> Rect {
        Rect {
            u_min: self.u_min + du,
            u_max: self.u_max + du,
            v_min: self.v_min + dv,
            v_max: self.v_max + dv,
        }
    }
}

/// Linear map from grid indices `(n, k)` to plane coordinates `(n dt, k df)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneScale {
    pub time_step: f64,
    pub freq_step: f64,
}

impl PlaneScale {
    /// `(n, k) -> (n / T, k T / K)`, which makes noise zeros isotropic.
    pub fn new(width: f64, bins: usize) -> Self {
        Self {
            time_step: 1.0 / width,
            freq_step: width / bins as f64,
        }
    }

    pub fn from_params(params: &TfParams) -> Self {
        Self::new(params.width, params.bins)
    }

    pub fn to_plane(&self, n: f64, k: f64) -> [f64; 2] {
        [n * self.time_step, k * self.freq_step]
    }

    /// Window covering grid cells `margin..shape - margin` on both axes.
    pub fn trimmed_window(&self, shape: (usize, usize), margin: usize) -> Result<Rect> {
        let (rows, cols) = shape;
        if rows <= 2 * margin || cols <= 2 * margin {
            return Err(invalid(format!(
                "margin {margin} leaves nothing of a {rows}x{cols} grid"
            )));
        }
        let lo = self.to_plane(margin as f64, margin as f64);
        let hi = self.to_plane((rows - 1 - margin) as f64, (cols - 1 - margin) as f64);
        Rect::new(lo[0], hi[0], lo[1], hi[1])
    }
}

/// Points in the plane with their observation window.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarPointSet {
    points: Vec<[f64; 2]>,
    window: Rect,
}

impl PlanarPointSet {
    /// Fails if a point lies outside the window.
    pub fn new(points: Vec<[f64; 2]>, window: Rect) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !window.contains(**p)) {
            return Err(invalid(format!("point {p:?} outside window {window:?}")));
        }
        Ok(Self { points, window })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn window(&self) -> &Rect {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn translated(&self, du: f64, dv: f64) -> PlanarPointSet {
        PlanarPointSet {
            points: self.points.iter().map(|p| [p[0] + du, p[1] + dv]).collect(),
            window: self.window.translated(du, dv),
        }
    }
}

/// Maps grid zeros to the plane; the window is the margin-trimmed search grid.
pub fn scale_zeros(zeros: &GridZeroSet, scale: &PlaneScale) -> Result<PlanarPointSet> {
    let window = scale.trimmed_window(zeros.shape(), zeros.margin())?;
    let points = zeros
        .points()
        .iter()
        .map(|&(n, k)| scale.to_plane(n as f64, k as f64))
        .collect();
    PlanarPointSet::new(points, window)
}
