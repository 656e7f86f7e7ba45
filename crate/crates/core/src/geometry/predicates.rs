//! Orientation and in-circle tests with a floating-point filter and an exact
//! rational fallback.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

const EPS: f64 = f64::EPSILON / 2.0;

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

fn sign_of(x: &BigRational) -> Ordering {
    if x.is_zero() {
        Ordering::Equal
    } else if x.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn sign_f64(x: f64) -> Ordering {
    x.partial_cmp(&0.0).expect("finite determinant")
}

/// Sign of the signed area of `(a, b, c)`: `Greater` when counter-clockwise.
pub fn orient2d(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Ordering {
    let left = (a[0] - c[0]) * (b[1] - c[1]);
    let right = (a[1] - c[1]) * (b[0] - c[0]);
    let det = left - right;
    let bound = (3.0 + 16.0 * EPS) * EPS * (left.abs() + right.abs());
    if det.abs() > bound {
        return sign_f64(det);
    }
    orient2d_exact(a, b, c)
}

pub(crate) fn orient2d_exact(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Ordering {
    let [ax, ay, bx, by, cx, cy] = [a[0], a[1], b[0], b[1], c[0], c[1]].map(exact);
    let det = (&ax - &cx) * (&by - &cy) - (&ay - &cy) * (&bx - &cx);
    sign_of(&det)
}

/// `Greater` when `d` is strictly inside the circle through the
/// counter-clockwise triangle `(a, b, c)`, `Equal` when cocircular.
pub fn incircle(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> Ordering {
    let (adx, ady) = (a[0] - d[0], a[1] - d[1]);
    let (bdx, bdy) = (b[0] - d[0], b[1] - d[1]);
    let (cdx, cdy) = (c[0] - d[0], c[1] - d[1]);
    let (bdxcdy, cdxbdy) = (bdx * cdy, cdx * bdy);
    let (cdxady, adxcdy) = (cdx * ady, adx * cdy);
    let (adxbdy, bdxady) = (adx * bdy, bdx * ady);
    let alift = adx * adx + ady * ady;
    let blift = bdx * bdx + bdy * bdy;
    let clift = cdx * cdx + cdy * cdy;
    let det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    let permanent = (bdxcdy.abs() + cdxbdy.abs()) * alift
        + (cdxady.abs() + adxcdy.abs()) * blift
        + (adxbdy.abs() + bdxady.abs()) * clift;
    let bound = (10.0 + 96.0 * EPS) * EPS * permanent;
    if det.abs() > bound {
        return sign_f64(det);
    }
    incircle_exact(a, b, c, d)
}

pub(crate) fn incircle_exact(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> Ordering {
    let [ax, ay, bx, by, cx, cy, dx, dy] = [a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1]].map(exact);
    let (adx, ady) = (&ax - &dx, &ay - &dy);
    let (bdx, bdy) = (&bx - &dx, &by - &dy);
    let (cdx, cdy) = (&cx - &dx, &cy - &dy);
    let alift = &adx * &adx + &ady * &ady;
    let blift = &bdx * &bdx + &bdy * &bdy;
    let clift = &cdx * &cdx + &cdy * &cdy;
    let det = alift * (&bdx * &cdy - &cdx * &bdy) + blift * (&cdx * &ady - &adx * &cdy)
        + clift * (&adx * &bdy - &bdx * &ady);
    sign_of(&det)
}

/// Exact test that `p` lies on the closed segment `ab` (given collinearity).
pub(crate) fn within_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    let inside = |lo: f64, hi: f64, v: f64| lo.min(hi) <= v && v <= lo.max(hi);
    inside(a[0], b[0], p[0]) && inside(a[1], b[1], p[1])
}
