use super::stft::Spectrogram;
use crate::scalar::Real;

/// How equal neighbor values are treated by [`find_zeros_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    /// Only cells strictly below all 8 neighbors. Plateaus yield nothing.
    #[default]
    Strict,
    /// Compare `(value, n, k)` lexicographically, so every plateau has
    /// exactly one winner. Meant for synthetic grids with exact ties.
    Lexicographic,
}

/// Local minima of a spectrogram, as `(n, k)` grid indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridZeroSet {
    points: Vec<(usize, usize)>,
    margin: usize,
    shape: (usize, usize),
}

impl GridZeroSet {
    pub fn new(points: Vec<(usize, usize)>, margin: usize, shape: (usize, usize)) -> Self {
        Self {
            points,
            margin,
            shape,
        }
    }

    pub fn points(&self) -> &[(usize, usize)] {
        &self.points
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    /// Shape of the searched grid.
    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Strict 3x3 local minima at distance `>= margin` from every edge.
///
/// A margin of zero is treated as one, since edge cells lack neighbors.
pub fn find_zeros<T: Real>(spec: &Spectrogram<T>, margin: usize) -> GridZeroSet {
    find_zeros_with(spec, margin, TieRule::Strict)
}

pub fn find_zeros_with<T: Real>(spec: &Spectrogram<T>, margin: usize, ties: TieRule) -> GridZeroSet {
    let v = spec.values();
    let (rows, cols) = v.dim();
    let margin = margin.max(1);
    let mut points = Vec::new();
    if rows < 2 * margin + 1 || cols < 2 * margin + 1 {
        return GridZeroSet::new(points, margin, (rows, cols));
    }
    for n in margin..rows - margin {
        for k in margin..cols - margin {
            let c = v[[n, k]];
            let mut is_min = true;
            'nb: for dn in 0..3 {
                for dk in 0..3 {
                    if dn == 1 && dk == 1 {
                        continue;
                    }
                    let (nn, kk) = (n + dn - 1, k + dk - 1);
                    let w = v[[nn, kk]];
                    let below = match ties {
                        TieRule::Strict => c < w,
                        TieRule::Lexicographic => c < w || (c == w && (n, k) < (nn, kk)),
                    };
                    if !below {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if is_min {
                points.push((n, k));
            }
        }
    }
    GridZeroSet::new(points, margin, (rows, cols))
}
