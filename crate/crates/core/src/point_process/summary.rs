use super::index::PointIndex;
use super::plane::PlanarPointSet;
use crate::error::{invalid, Error, Result};

/// Default reference locations per unit area.
pub const DEFAULT_REF_DENSITY: f64 = 4.0;

/// Strictly increasing, non-negative radii.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusGrid {
    radii: Vec<f64>,
}

impl RadiusGrid {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(invalid("radius grid is empty"));
        }
        if !(radii[0] >= 0.0) || radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("radii must be non-negative and strictly increasing"));
        }
        Ok(Self { radii })
    }

    /// `count` equispaced radii on `[lo, hi]`.
    pub fn linspace(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count == 1 {
            return Self::new(vec![lo]);
        }
        let step = (hi - lo) / (count - 1) as f64;
        Self::new((0..count).map(|i| lo + step * i as f64).collect())
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Integration weight of each radius: the gap to the next one
    /// (the last radius reuses the previous gap).
    pub fn spacing(&self) -> Vec<f64> {
        let r = &self.radii;
        if r.len() == 1 {
            return vec![1.0];
        }
        (0..r.len())
            .map(|i| if i + 1 < r.len() { r[i + 1] - r[i] } else { r[i] - r[i - 1] })
            .collect()
    }

    /// Indices of radii inside `[lo, hi]`.
    pub fn indices_within(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let a = self.radii.partition_point(|&r| r < lo);
        let b = self.radii.partition_point(|&r| r <= hi);
        a..b.max(a)
    }
}

impl Default for RadiusGrid {
    /// 100 radii on `[0, 2]`.
    fn default() -> Self {
        Self::linspace(0.0, 2.0, 100).expect("valid grid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum SummaryKind {
    /// Empty space function.
    F,
    /// `arcsin(sqrt(F))`.
    FTilde,
}

impl SummaryKind {
    pub fn name(self) -> &'static str {
        match self {
            SummaryKind::F => "F",
            SummaryKind::FTilde => "F_tilde",
        }
    }

    /// Upper end of the value range.
    pub fn max_value(self) -> f64 {
        match self {
            SummaryKind::F => 1.0,
            SummaryKind::FTilde => std::f64::consts::FRAC_PI_2,
        }
    }
}

/// Estimated summary function on a radius grid. Undefined entries are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryCurve {
    radii: RadiusGrid,
    values: Vec<f64>,
    kind: SummaryKind,
}

impl SummaryCurve {
    pub fn new(radii: RadiusGrid, values: Vec<f64>, kind: SummaryKind) -> Result<Self> {
        if radii.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: radii.len(),
                right: values.len(),
            });
        }
        Ok(Self { radii, values, kind })
    }

    pub fn radii(&self) -> &RadiusGrid {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> SummaryKind {
        self.kind
    }

    pub fn is_defined(&self, i: usize) -> bool {
        !self.values[i].is_nan()
    }
}

/// Regular lattice of reference locations with spacing `1/sqrt(density)`,
/// offset half a step from the lower-left corner.
pub fn reference_lattice(pts: &PlanarPointSet, density: f64) -> Result<Vec<[f64; 2]>> {
    if !(density > 0.0) || !density.is_finite() {
        return Err(invalid(format!("reference density must be positive, got {density}")));
    }
    let w = pts.window();
    let h = density.sqrt().recip();
    let nu = (w.width() / h).floor() as usize;
    let nv = (w.height() / h).floor() as usize;
    let mut out = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = w.u_min + (i as f64 + 0.5) * h;
        for j in 0..nv {
            out.push([u, w.v_min + (j as f64 + 0.5) * h]);
        }
    }
    Ok(out)
}

/// Border-corrected (reduced-sample) estimate of the empty space function.
///
/// `F(r) = #{u : b(u) >= r, d(u) <= r} / #{u : b(u) >= r}` over the reference
/// lattice, where `b` is the distance to the window boundary and `d` the
/// distance to the nearest point. Radii with an empty denominator are NaN.
pub fn empty_space_estimate(pts: &PlanarPointSet, radii: &RadiusGrid, ref_density: f64) -> Result<SummaryCurve> {
    let refs = reference_lattice(pts, ref_density)?;
    let index = PointIndex::from_set(pts);
    let w = pts.window();
    let pairs: Vec<(f64, f64)> = refs
        .iter()
        .map(|&u| (w.border_distance(u), index.nearest_distance(u)))
        .collect();
    Ok(curve_from_pairs(&pairs, radii))
}

pub(crate) fn curve_from_pairs(pairs: &[(f64, f64)], radii: &RadiusGrid) -> SummaryCurve {
    let values = radii
        .radii()
        .iter()
        .map(|&r| {
            let (mut num, mut den) = (0usize, 0usize);
            for &(b, d) in pairs {
                if b >= r {
                    den += 1;
                    if d <= r {
                        num += 1;
                    }
                }
            }
            if den == 0 {
                f64::NAN
            } else {
                num as f64 / den as f64
            }
        })
        .collect();
    SummaryCurve {
        radii: radii.clone(),
        values,
        kind: SummaryKind::F,
    }
}

/// `arcsin(sqrt(F))`, keeping undefined entries undefined.
pub fn variance_stabilize(curve: &SummaryCurve) -> Result<SummaryCurve> {
    if curve.kind != SummaryKind::F {
        return Err(Error::KindMismatch {
            expected: SummaryKind::F.name(),
            actual: curve.kind.name(),
        });
    }
    Ok(SummaryCurve {
        radii: curve.radii.clone(),
        values: curve.values.iter().map(|&f| f.clamp(0.0, 1.0).sqrt().asin()).collect(),
        kind: SummaryKind::FTilde,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point_process::Rect;

    fn unit_square(points: Vec<[f64; 2]>) -> PlanarPointSet {
        PlanarPointSet::new(points, Rect::new(0.0, 1.0, 0.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn radius_grid_validation() {
        assert!(RadiusGrid::new(vec![]).is_err());
        assert!(RadiusGrid::new(vec![-0.1, 0.2]).is_err());
        assert!(RadiusGrid::new(vec![0.1, 0.1]).is_err());
        let g = RadiusGrid::default();
        assert_eq!(g.len(), 100);
        assert_eq!(g.radii()[0], 0.0);
        assert!((g.radii()[99] - 2.0).abs() < 1e-15);
        let s = g.spacing();
        assert!(s.iter().all(|&d| (d - 2.0 / 99.0).abs() < 1e-12));
        assert_eq!(g.indices_within(0.5, 1.0), 25..50);
    }

    #[test]
    fn empty_pattern_gives_zero() {
        let c = empty_space_estimate(&unit_square(vec![]), &RadiusGrid::default(), 100.0).unwrap();
        for (i, &v) in c.values().iter().enumerate() {
            if c.is_defined(i) {
                assert_eq!(v, 0.0);
            }
        }
        assert!(!c.is_defined(99));
        assert!(c.is_defined(0));
    }

    #[test]
    fn single_center_point_matches_double_loop() {
        let pts = unit_square(vec![[0.5, 0.5]]);
        let radii = RadiusGrid::new(vec![0.1]).unwrap();
        let c = empty_space_estimate(&pts, &radii, 10_000.0).unwrap();
        let (mut num, mut den) = (0, 0);
        for i in 0..100 {
            for j in 0..100 {
                let (u, v) = ((i as f64 + 0.5) / 100.0, (j as f64 + 0.5) / 100.0);
                let b = u.min(1.0 - u).min(v).min(1.0 - v);
                if b >= 0.1 {
                    den += 1;
                    if ((u - 0.5).powi(2) + (v - 0.5).powi(2)).sqrt() <= 0.1 {
                        num += 1;
                    }
                }
            }
        }
        assert_eq!(c.values()[0], num as f64 / den as f64);
    }

    #[test]
    fn square_lattice_is_covered_at_half_diagonal() {
        let d = 0.125;
        let pts: Vec<[f64; 2]> = (0..=8)
            .flat_map(|i| (0..=8).map(move |j| [i as f64 * d, j as f64 * d]))
            .collect();
        let radii = RadiusGrid::linspace(0.0, 0.4, 41).unwrap();
        let c = empty_space_estimate(&unit_square(pts), &radii, 400.0).unwrap();
        for (i, &r) in radii.radii().iter().enumerate() {
            if r >= d / 2f64.sqrt() && c.is_defined(i) {
                assert_eq!(c.values()[i], 1.0);
            }
        }
    }

    #[test]
    fn stabilization() {
        let radii = RadiusGrid::linspace(0.0, 1.0, 4).unwrap();
        let c = SummaryCurve::new(radii, vec![0.0, 0.5, 1.0, f64::NAN], SummaryKind::F).unwrap();
        let t = variance_stabilize(&c).unwrap();
        assert_eq!(t.values()[0], 0.0);
        assert!((t.values()[1] - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(t.values()[2], std::f64::consts::FRAC_PI_2);
        assert!(t.values()[3].is_nan());
        assert!(matches!(variance_stabilize(&t), Err(Error::KindMismatch { .. })));
    }
}
