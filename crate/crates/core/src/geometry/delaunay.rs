//! Incremental Bowyer–Watson triangulation with ghost triangles on the hull.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::predicates::{incircle, orient2d, within_segment};
use crate::error::{Error, Result};

/// A counter-clockwise triangle referring to indices of the input points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub vertices: [usize; 3],
    pub corners: [[f64; 2]; 3],
}

impl Triangle {
    pub fn edge_lengths(&self) -> [f64; 3] {
        let d = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
        let [a, b, c] = self.corners;
        [d(a, b), d(b, c), d(c, a)]
    }

    pub fn max_edge(&self) -> f64 {
        self.edge_lengths().into_iter().fold(0.0, f64::max)
    }

    pub fn area(&self) -> f64 {
        let [a, b, c] = self.corners;
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    }

    pub fn circumcenter(&self) -> [f64; 2] {
        let [a, b, c] = self.corners;
        let (bx, by) = (b[0] - a[0], b[1] - a[1]);
        let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
        let d = 2.0 * (bx * cy - by * cx);
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        [a[0] + (cy * b2 - by * c2) / d, a[1] + (bx * c2 - cx * b2) / d]
    }

    pub fn circumradius(&self) -> f64 {
        let c = self.circumcenter();
        let a = self.corners[0];
        (a[0] - c[0]).hypot(a[1] - c[1])
    }

    /// Closed containment with exact orientation tests.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        let [a, b, c] = self.corners;
        orient2d(a, b, p) != Ordering::Less
            && orient2d(b, c, p) != Ordering::Less
            && orient2d(c, a, p) != Ordering::Less
    }
}

/// Delaunay triangulation of a planar point set.
#[derive(Debug, Clone)]
pub struct Triangulation {
    points: Vec<[f64; 2]>,
    triangles: Vec<Triangle>,
    duplicates: Vec<usize>,
}

impl Triangulation {
    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Indices of input points dropped as exact duplicates of earlier ones.
    pub fn duplicates(&self) -> &[usize] {
        &self.duplicates
    }

    /// Undirected edges, each reported once with the smaller index first.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut out: Vec<[usize; 2]> = self
            .triangles
            .iter()
            .flat_map(|t| {
                let [a, b, c] = t.vertices;
                [[a, b], [b, c], [c, a]]
            })
            .map(|[a, b]| [a.min(b), a.max(b)])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// True when no input point lies strictly inside any circumcircle.
    pub fn is_delaunay(&self) -> bool {
        self.triangles.iter().all(|t| {
            let [a, b, c] = t.corners;
            self.points
                .iter()
                .enumerate()
                .filter(|(i, _)| !t.vertices.contains(i))
                .all(|(_, &p)| incircle(a, b, c, p) != Ordering::Greater)
        })
    }
}

struct Mesh<'a> {
    pts: &'a [[f64; 2]],
    ghost: usize,
    tris: Vec<[usize; 3]>,
    alive: Vec<bool>,
    free: Vec<usize>,
    edges: HashMap<(usize, usize), usize>,
}

impl<'a> Mesh<'a> {
    fn add(&mut self, t: [usize; 3]) {
        let id = match self.free.pop() {
            Some(id) => {
                self.tris[id] = t;
                self.alive[id] = true;
                id
            }
            None => {
                self.tris.push(t);
                self.alive.push(true);
                self.tris.len() - 1
            }
        };
        for e in 0..3 {
            self.edges.insert((t[e], t[(e + 1) % 3]), id);
        }
    }

    fn remove(&mut self, id: usize) {
        let t = self.tris[id];
        for e in 0..3 {
            self.edges.remove(&(t[e], t[(e + 1) % 3]));
        }
        self.alive[id] = false;
        self.free.push(id);
    }

    fn in_conflict(&self, id: usize, p: [f64; 2]) -> bool {
        let [a, b, c] = self.tris[id];
        if c == self.ghost {
            let (pa, pb) = (self.pts[a], self.pts[b]);
            match orient2d(pa, pb, p) {
                Ordering::Greater => true,
                Ordering::Equal => within_segment(pa, pb, p),
                Ordering::Less => false,
            }
        } else {
            incircle(self.pts[a], self.pts[b], self.pts[c], p) == Ordering::Greater
        }
    }

    fn insert(&mut self, v: usize) {
        let p = self.pts[v];
        let seed = (0..self.tris.len())
            .filter(|&i| self.alive[i] && self.tris[i][2] == self.ghost)
            .find(|&i| self.in_conflict(i, p))
            .or_else(|| (0..self.tris.len()).find(|&i| self.alive[i] && self.in_conflict(i, p)))
            .expect("a new point conflicts with at least one triangle");

        let mut cavity = vec![seed];
        let mut seen = vec![false; self.tris.len()];
        seen[seed] = true;
        let mut head = 0;
        while head < cavity.len() {
            let t = self.tris[cavity[head]];
            head += 1;
            for e in 0..3 {
                if let Some(&nb) = self.edges.get(&(t[(e + 1) % 3], t[e])) {
                    if !seen[nb] && self.in_conflict(nb, p) {
                        seen[nb] = true;
                        cavity.push(nb);
                    }
                }
            }
        }

        let mut boundary = Vec::new();
        for &id in &cavity {
            let t = self.tris[id];
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                let outside = self.edges.get(&(b, a)).is_none_or(|&nb| !seen[nb]);
                if outside {
                    boundary.push((a, b));
                }
            }
        }
        for &id in &cavity {
            self.remove(id);
        }
        for (a, b) in boundary {
            let t = if a == self.ghost {
                [b, v, self.ghost]
            } else if b == self.ghost {
                [v, a, self.ghost]
            } else {
                [a, b, v]
            };
            self.add(t);
        }
    }
}

/// Delaunay triangulation of `points`.
///
/// Exact duplicates are skipped. Cocircular configurations are resolved by
/// inserting points in lexicographic order and only retriangulating on strict
/// in-circle conflicts, so the output is deterministic.
pub fn triangulate(points: &[[f64; 2]]) -> Result<Triangulation> {
    if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(Error::InvalidParameter("non-finite point coordinate".into()));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        points[i][0]
            .total_cmp(&points[j][0])
            .then(points[i][1].total_cmp(&points[j][1]))
            .then(i.cmp(&j))
    });
    let mut unique = Vec::with_capacity(order.len());
    let mut duplicates = Vec::new();
    for &i in &order {
        match unique.last() {
            Some(&j) if points[j] == points[i] => duplicates.push(i),
            _ => unique.push(i),
        }
    }
    duplicates.sort_unstable();
    if unique.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "triangulation needs 3 distinct points, got {}",
            unique.len()
        )));
    }
    let pts: Vec<[f64; 2]> = unique.iter().map(|&i| points[i]).collect();
    let apex = (2..pts.len())
        .find(|&k| orient2d(pts[0], pts[1], pts[k]) != Ordering::Equal)
        .ok_or_else(|| Error::DegenerateInput("all points are collinear".into()))?;

    let ghost = pts.len();
    let mut mesh = Mesh {
        pts: &pts,
        ghost,
        tris: Vec::new(),
        alive: Vec::new(),
        free: Vec::new(),
        edges: HashMap::new(),
    };
    let [a, b, c] = if orient2d(pts[0], pts[1], pts[apex]) == Ordering::Greater {
        [0, 1, apex]
    } else {
        [0, apex, 1]
    };
    mesh.add([a, b, c]);
    mesh.add([b, a, ghost]);
    mesh.add([c, b, ghost]);
    mesh.add([a, c, ghost]);
    for v in (2..pts.len()).filter(|&v| v != apex) {
        mesh.insert(v);
    }

    let mut triangles: Vec<Triangle> = mesh
        .tris
        .iter()
        .zip(&mesh.alive)
        .filter(|(t, &alive)| alive && t[2] != ghost)
        .map(|(t, _)| {
            let vertices = t.map(|k| unique[k]);
            Triangle {
                vertices,
                corners: vertices.map(|k| points[k]),
            }
        })
        .collect();
    triangles.sort_by_key(|t| {
        let mut key = t.vertices;
        key.sort_unstable();
        key
    });
    Ok(Triangulation {
        points: points.to_vec(),
        triangles,
        duplicates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn strict_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
        let mut p = points.to_vec();
        p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        p.dedup();
        let mut hull: Vec<[f64; 2]> = Vec::new();
        for pass in 0..2 {
            let start = hull.len();
            let seq: Vec<[f64; 2]> = if pass == 0 { p.clone() } else { p.iter().rev().copied().collect() };
            for q in seq {
                while hull.len() >= start + 2
                    && orient2d(hull[hull.len() - 2], hull[hull.len() - 1], q) != Ordering::Greater
                {
                    hull.pop();
                }
                hull.push(q);
            }
            hull.pop();
        }
        hull
    }

    fn points_on_hull(points: &[[f64; 2]]) -> usize {
        let hull = strict_hull(points);
        let mut p = points.to_vec();
        p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        p.dedup();
        p.iter()
            .filter(|&&q| {
                (0..hull.len()).any(|i| {
                    let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
                    orient2d(a, b, q) == Ordering::Equal && within_segment(a, b, q)
                })
            })
            .count()
    }

    fn check_euler(points: &[[f64; 2]], dt: &Triangulation) {
        let n = points.len() - dt.duplicates().len();
        let h = points_on_hull(points);
        assert_eq!(dt.len(), 2 * n - 2 - h);
    }

    #[test]
    fn unit_square_gets_two_triangles() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let dt = triangulate(&pts).unwrap();
        assert_eq!(dt.len(), 2);
        assert!(dt.is_delaunay());
        let area: f64 = dt.triangles().iter().map(Triangle::area).sum();
        assert!((area - 1.0).abs() < 1e-15);
        // lexicographic insertion keeps the diagonal between (0,1) and (1,0)
        assert!(dt.edges().contains(&[1, 3]));
        assert_eq!(dt.edges().len(), 5);
    }

    #[test]
    fn triangles_are_counter_clockwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<[f64; 2]> = (0..200).map(|_| [rng.gen(), rng.gen()]).collect();
        let dt = triangulate(&pts).unwrap();
        for t in dt.triangles() {
            let [a, b, c] = t.corners;
            assert_eq!(orient2d(a, b, c), Ordering::Greater);
            assert!(t.area() > 0.0);
        }
        assert!(dt.is_delaunay());
        check_euler(&pts, &dt);
    }

    #[test]
    fn integer_grid_with_many_cocircular_quads() {
        let pts: Vec<[f64; 2]> = (0..8)
            .flat_map(|i| (0..6).map(move |j| [i as f64, j as f64]))
            .collect();
        let dt = triangulate(&pts).unwrap();
        assert!(dt.is_delaunay());
        assert_eq!(dt.len(), 2 * 7 * 5);
        let area: f64 = dt.triangles().iter().map(Triangle::area).sum();
        assert!((area - 35.0).abs() < 1e-12);
        let again = triangulate(&pts).unwrap();
        assert_eq!(dt.triangles(), again.triangles());
    }

    #[test]
    fn anisotropic_lattice_like_scaled_zeros() {
        let (dt_step, df_step) = (1.0 / 22.627, 22.627 / 512.0);
        let pts: Vec<[f64; 2]> = (0..40)
            .flat_map(|i| (0..30).map(move |j| [i as f64 * dt_step * 3.0, j as f64 * df_step * 2.0]))
            .collect();
        let dt = triangulate(&pts).unwrap();
        assert!(dt.is_delaunay());
        assert_eq!(dt.len(), 2 * 39 * 29);
    }

    #[test]
    fn duplicates_are_skipped() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [1.0, 0.0]];
        let dt = triangulate(&pts).unwrap();
        assert_eq!(dt.duplicates(), &[2, 4]);
        assert_eq!(dt.len(), 1);
    }

    #[test]
    fn collinear_input_fails() {
        let pts: Vec<[f64; 2]> = (0..10).map(|i| [i as f64, 2.0 * i as f64]).collect();
        assert!(matches!(triangulate(&pts), Err(Error::DegenerateInput(_))));
        assert!(triangulate(&[[0.0, 0.0], [1.0, 1.0]]).is_err());
        assert!(triangulate(&[[0.0, 0.0], [1.0, f64::NAN], [2.0, 0.0]]).is_err());
    }

    #[test]
    fn collinear_prefix_then_apex() {
        let mut pts: Vec<[f64; 2]> = (0..6).map(|i| [i as f64, 0.0]).collect();
        pts.push([2.5, 1.0]);
        pts.push([2.5, -1.0]);
        let dt = triangulate(&pts).unwrap();
        assert!(dt.is_delaunay());
        check_euler(&pts, &dt);
    }

    #[test]
    fn circumcircle_geometry() {
        let t = Triangle {
            vertices: [0, 1, 2],
            corners: [[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]],
        };
        let c = t.circumcenter();
        assert!((c[0] - 1.0).abs() < 1e-15 && (c[1] - 1.0).abs() < 1e-15);
        assert!((t.circumradius() - 2f64.sqrt()).abs() < 1e-15);
        assert!((t.max_edge() - 8f64.sqrt()).abs() < 1e-15);
        assert!(t.contains([1.0, 1.0]));
        assert!(t.contains([0.0, 0.0]));
        assert!(!t.contains([1.0 + 1e-12, 1.0]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_sets_are_delaunay(seed in any::<u64>(), n in 3usize..80, snap in 0u32..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = [1.0, 8.0, 64.0][snap as usize];
            let pts: Vec<[f64; 2]> = (0..n)
                .map(|_| {
                    let x: f64 = rng.gen();
                    let y: f64 = rng.gen();
                    if snap == 0 { [x, y] } else { [(x * q).floor() / q, (y * q).floor() / q] }
                })
                .collect();
            if let Ok(dt) = triangulate(&pts) {
                prop_assert!(dt.is_delaunay());
                check_euler(&pts, &dt);
                for t in dt.triangles() {
                    prop_assert_eq!(orient2d(t.corners[0], t.corners[1], t.corners[2]), Ordering::Greater);
                }
            }
        }
    }
}
