//! Adaptive Simpson quadrature.
//!
//! The integrals in this crate (a compactified confluent-hypergeometric
//! integral and a Laplace-transform oracle) have a single peak that
//! migrates with the parameters, so the strategy is: split the domain
//! into an initial panel grid, then bisect each panel until the local
//! Simpson estimate stabilizes.

use crate::{Error, Result};

const MAX_DEPTH: u32 = 48;

#[derive(Clone, Copy)]
struct Sample {
    x: f64,
    f: f64,
}

fn simpson(a: Sample, m: Sample, b: Sample) -> f64 {
    (b.x - a.x) / 6.0 * (a.f + 4.0 * m.f + b.f)
}

fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: Sample,
    b: Sample,
    m: Sample,
    whole: f64,
    tol: f64,
    depth: u32,
    min_depth: u32,
) -> Result<f64> {
    let lm = Sample { x: 0.5 * (a.x + m.x), f: f(0.5 * (a.x + m.x)) };
    let rm = Sample { x: 0.5 * (m.x + b.x), f: f(0.5 * (m.x + b.x)) };
    let left = simpson(a, lm, m);
    let right = simpson(m, rm, b);
    let err = left + right - whole;
    if depth >= min_depth && err.abs() <= 15.0 * tol {
        return Ok(left + right + err / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::QuadratureFailure { a: a.x, b: b.x });
    }
    let half_tol = 0.5 * tol;
    let l = recurse(f, a, m, lm, left, half_tol, depth + 1, min_depth)?;
    let r = recurse(f, m, b, rm, right, half_tol, depth + 1, min_depth)?;
    Ok(l + r)
}

/// Integrate `f` over `[a, b]` with adaptive Simpson bisection until the
/// local error estimate drops below `tol` (an absolute tolerance for the
/// whole interval). `min_depth` forces that many bisection levels before
/// a panel may be accepted, which guards against narrow peaks slipping
/// between the initial sample points.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    min_depth: u32,
) -> Result<f64> {
    let sa = Sample { x: a, f: f(a) };
    let sb = Sample { x: b, f: f(b) };
    let xm = 0.5 * (a + b);
    let sm = Sample { x: xm, f: f(xm) };
    let whole = simpson(sa, sm, sb);
    recurse(&f, sa, sb, sm, whole, tol, 0, min_depth)
}

/// Integrate `f` over a grid of panel boundaries (ascending), applying
/// [`adaptive_simpson`] per panel with the tolerance split evenly.
pub fn adaptive_simpson_panels<F: Fn(f64) -> f64>(
    f: F,
    boundaries: &[f64],
    tol: f64,
    min_depth: u32,
) -> Result<f64> {
    debug_assert!(boundaries.len() >= 2);
    let per_panel = tol / (boundaries.len() - 1) as f64;
    let mut sum = 0.0;
    for w in boundaries.windows(2) {
        sum += adaptive_simpson(&f, w[0], w[1], per_panel, min_depth)?;
    }
    Ok(sum)
}

/// Uniform panel boundaries: `points` samples from `a` to `b` inclusive.
pub fn uniform_grid(a: f64, b: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}
