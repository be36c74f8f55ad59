//! Gauss hypergeometric series ₂F₁(a, b, c, z) for positive parameters
//! and z ∈ [0, 1).
//!
//! Every use in this crate has a = j+1, c = j+1+γ with γ > 0, so the
//! Pochhammer ratio (a)ₖ/(c)ₖ stays below 1 and the plain power series
//! converges geometrically at rate z; no transformation formulas are
//! needed.

use super::SpecFunConfig;
use crate::{Error, Result};

/// ₂F₁(a, b, c, z) = Σₖ (a)ₖ(b)ₖ/(c)ₖ · zᵏ/k! by the term-ratio
/// recurrence, truncated once a geometric bound on the remainder drops
/// below `rel_tol` times the partial sum.
///
/// The series is symmetric in (a, b); arguments are canonicalized so the
/// two orders produce bit-identical results.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64, config: &SpecFunConfig) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) || !(c > 0.0) {
        return Err(Error::Domain(format!(
            "gauss_2f1 requires positive parameters, got ({a}, {b}, {c})"
        )));
    }
    if !(0.0..1.0).contains(&z) {
        return Err(Error::Domain(format!(
            "gauss_2f1 requires z in [0, 1), got {z}"
        )));
    }
    let (a, b) = if a <= b { (a, b) } else { (b, a) };

    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..config.max_terms {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        term *= ratio;
        sum += term;
        // Each factor (a+m)/(c+m) and (b+m)/(1+m) of the term ratio is
        // monotone in m with limit 1, so its supremum over m > k is the
        // larger of its next value and 1. That gives a rigorous geometric
        // bound r̄ on all later ratios and a remainder below term·r̄/(1-r̄).
        let r_bar = z
            * ((a + kf + 1.0) / (c + kf + 1.0)).max(1.0)
            * ((b + kf + 1.0) / (kf + 2.0)).max(1.0);
        if r_bar < 1.0 && term * r_bar / (1.0 - r_bar) < config.rel_tol * sum {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { max_terms: config.max_terms })
}
