use super::plane::PlanarPointSet;

/// Uniform bucket grid for exact nearest-neighbor queries.
#[derive(Debug, Clone)]
pub struct PointIndex {
    points: Vec<[f64; 2]>,
    origin: [f64; 2],
    cell: f64,
    nx: usize,
    ny: usize,
    /// Bucket `i` holds `order[start[i]..start[i + 1]]`.
    start: Vec<usize>,
    order: Vec<usize>,
}

impl PointIndex {
    pub fn new(points: &[[f64; 2]]) -> Self {
        let n = points.len();
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for a in 0..2 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        if n == 0 {
            lo = [0.0; 2];
            hi = [0.0; 2];
        }
        let w = (hi[0] - lo[0]).max(1e-12);
        let h = (hi[1] - lo[1]).max(1e-12);
        // about two points per bucket
        let cell = (w * h * 2.0 / n.max(1) as f64).sqrt().max(w.max(h) / 1024.0);
        let nx = ((w / cell).floor() as usize + 1).max(1);
        let ny = ((h / cell).floor() as usize + 1).max(1);
        let mut index = Self {
            points: points.to_vec(),
            origin: lo,
            cell,
            nx,
            ny,
            start: vec![0; nx * ny + 1],
            order: vec![0; n],
        };
        let buckets: Vec<usize> = points.iter().map(|&p| index.bucket_of(p)).collect();
        for &b in &buckets {
            index.start[b + 1] += 1;
        }
        for i in 0..nx * ny {
            index.start[i + 1] += index.start[i];
        }
        let mut fill = index.start.clone();
        for (i, &b) in buckets.iter().enumerate() {
            index.order[fill[b]] = i;
            fill[b] += 1;
        }
        index
    }

    pub fn from_set(set: &PlanarPointSet) -> Self {
        Self::new(set.points())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn cell_coord(&self, x: f64, axis: usize) -> i64 {
        ((x - self.origin[axis]) / self.cell).floor() as i64
    }

    fn bucket_of(&self, p: [f64; 2]) -> usize {
        let cx = self.cell_coord(p[0], 0).clamp(0, self.nx as i64 - 1) as usize;
        let cy = self.cell_coord(p[1], 1).clamp(0, self.ny as i64 - 1) as usize;
        cy * self.nx + cx
    }

    /// Index of and distance to the nearest point; `None` when empty.
    pub fn nearest(&self, q: [f64; 2]) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let cx = self.cell_coord(q[0], 0).clamp(0, self.nx as i64 - 1);
        let cy = self.cell_coord(q[1], 1).clamp(0, self.ny as i64 - 1);
        let mut best = (usize::MAX, f64::INFINITY);
        let reach = self.nx.max(self.ny) as i64;
        for ring in 0..=reach {
            for (x, y) in ring_cells(cx, cy, ring) {
                if x < 0 || y < 0 || x >= self.nx as i64 || y >= self.ny as i64 {
                    continue;
                }
                let b = y as usize * self.nx + x as usize;
                for &i in &self.order[self.start[b]..self.start[b + 1]] {
                    let d = distance(self.points[i], q);
                    if d < best.1 || (d == best.1 && i < best.0) {
                        best = (i, d);
                    }
                }
            }
            // every cell outside this block is at least `bound` away
            let left = self.origin[0] + (cx - ring) as f64 * self.cell;
            let right = self.origin[0] + (cx + ring + 1) as f64 * self.cell;
            let bottom = self.origin[1] + (cy - ring) as f64 * self.cell;
            let top = self.origin[1] + (cy + ring + 1) as f64 * self.cell;
            let bound = (q[0] - left)
                .min(right - q[0])
                .min(q[1] - bottom)
                .min(top - q[1]);
            if best.1 <= bound {
                break;
            }
        }
        Some(best)
    }

    /// Distance to the nearest point, `+inf` when the index is empty.
    pub fn nearest_distance(&self, q: [f64; 2]) -> f64 {
        self.nearest(q).map_or(f64::INFINITY, |(_, d)| d)
    }
}

fn ring_cells(cx: i64, cy: i64, ring: i64) -> Vec<(i64, i64)> {
    if ring == 0 {
        return vec![(cx, cy)];
    }
    let mut out = Vec::with_capacity(8 * ring as usize);
    for x in cx - ring..=cx + ring {
        out.push((x, cy - ring));
        out.push((x, cy + ring));
    }
    for y in cy - ring + 1..cy + ring {
        out.push((cx - ring, y));
        out.push((cx + ring, y));
    }
    out
}

pub(crate) fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    (dx * dx + dy * dy).sqrt()
}

/// Exact nearest-neighbor distance from `query` to `pts`, `+inf` if empty.
pub fn nearest_distance(pts: &PlanarPointSet, query: [f64; 2]) -> f64 {
    pts.points()
        .iter()
        .map(|&p| distance(p, query))
        .fold(f64::INFINITY, f64::min)
}

/// Mean distance from each point to its nearest other point.
pub fn mean_nearest_neighbor_distance(points: &[[f64; 2]]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let total: f64 = (0..points.len())
        .map(|i| {
            points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &p)| distance(p, points[i]))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Some(total / points.len() as f64)
}
