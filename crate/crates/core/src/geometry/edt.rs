//! Exact Euclidean distance transform on an anisotropic grid.

use ndarray::Array2;

/// Squared distance from every cell to the nearest `true` cell, with cell
/// `(i, j)` located at `(i * row_step, j * col_step)`.
///
/// Cells are `+inf` when no feature exists. Separable lower-envelope
/// algorithm, exact up to the evaluation of `(di*row_step)^2 + (dj*col_step)^2`.
pub fn squared_distance_transform(features: &Array2<bool>, row_step: f64, col_step: f64) -> Array2<f64> {
    let (rows, cols) = features.dim();
    // per row, nearest feature column offset (in cells) along the column axis
    let mut col_pass = Array2::from_elem((rows, cols), f64::INFINITY);
    for i in 0..rows {
        let mut last: Option<usize> = None;
        for j in 0..cols {
            if features[[i, j]] {
                last = Some(j);
            }
            if let Some(l) = last {
                col_pass[[i, j]] = sq((j - l) as f64 * col_step);
            }
        }
        let mut next: Option<usize> = None;
        for j in (0..cols).rev() {
            if features[[i, j]] {
                next = Some(j);
            }
            if let Some(n) = next {
                let d = sq((n - j) as f64 * col_step);
                if d < col_pass[[i, j]] {
                    col_pass[[i, j]] = d;
                }
            }
        }
    }

    let mut out = Array2::from_elem((rows, cols), f64::INFINITY);
    let mut f = vec![0.0; rows];
    let mut v = vec![0usize; rows];
    let mut z = vec![0.0; rows + 1];
    for j in 0..cols {
        for i in 0..rows {
            f[i] = col_pass[[i, j]];
        }
        let parabola = |q: usize, p: usize| f[q] + sq((p as f64 - q as f64) * row_step);
        // lower envelope of parabolas over the finite entries
        let mut k: isize = -1;
        for q in 0..rows {
            if !f[q].is_finite() {
                continue;
            }
            loop {
                if k < 0 {
                    k = 0;
                    v[0] = q;
                    z[0] = f64::NEG_INFINITY;
                    z[1] = f64::INFINITY;
                    break;
                }
                let r = v[k as usize];
                let s = ((f[q] + sq(q as f64 * row_step)) - (f[r] + sq(r as f64 * row_step)))
                    / (2.0 * row_step * row_step * (q as f64 - r as f64));
                if s <= z[k as usize] {
                    k -= 1;
                    continue;
                }
                k += 1;
                v[k as usize] = q;
                z[k as usize] = s;
                z[k as usize + 1] = f64::INFINITY;
                break;
            }
        }
        if k < 0 {
            continue;
        }
        let mut idx = 0usize;
        for p in 0..rows {
            let x = p as f64;
            while z[idx + 1] < x {
                idx += 1;
            }
            // guard against rounding at breakpoints by checking the neighbours
            let lo = idx.saturating_sub(1);
            let hi = (idx + 1).min(k as usize);
            out[[p, j]] = (lo..=hi).map(|c| parabola(v[c], p)).fold(f64::INFINITY, f64::min);
        }
    }
    out
}

/// Euclidean distance transform, the square root of
/// [`squared_distance_transform`].
pub fn distance_transform(features: &Array2<bool>, row_step: f64, col_step: f64) -> Array2<f64> {
    squared_distance_transform(features, row_step, col_step).mapv(f64::sqrt)
}

fn sq(x: f64) -> f64 {
    x * x
}
