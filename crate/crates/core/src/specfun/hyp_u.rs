//! The fused confluent-hypergeometric product Γ(j)·U(j, 0, z).
//!
//! U alone overflows its Γ(j) normalization long before j reaches the
//! ranges needed by the critical-regime tail, so the product is computed
//! as one quantity from its integral representation
//!
//!   Γ(j)·U(j,0,z) = ∫₀^∞ e^{-zs} s^{j-1} (1+s)^{-j-1} ds.
//!
//! The substitution s = t/(1-t) collapses the integrand to
//! exp((j-1)·ln t - z·t/(1-t)) on (0,1): a single interior peak whose
//! location is the root of a quadratic, so the quadrature panels can be
//! anchored on it exactly. The exponent is factored against its maximum
//! so the result is formed in log space.

use super::SpecFunConfig;
use crate::quad::{adaptive_simpson_panels, uniform_grid};
use crate::Result;

/// Exponent of the compactified integrand.
fn log_integrand(j: f64, z: f64, t: f64) -> f64 {
    let decay = -z * t / (1.0 - t);
    if j == 1.0 {
        decay
    } else {
        (j - 1.0) * t.ln() + decay
    }
}

/// Peak location of the integrand in t, the root of (j-1)(1-t)² = z·t.
fn peak(j: f64, z: f64) -> f64 {
    if j <= 1.0 {
        return 0.0;
    }
    let a = j - 1.0;
    let disc = (4.0 * a * z + z * z).sqrt();
    let t = (2.0 * a + z - disc) / (2.0 * a);
    t.clamp(0.0, 1.0)
}

/// ln of Γ(j)·U(j, 0, z) for j ≥ 1, z > 0.
pub fn ln_hyp_u_b0(j: u64, z: f64, config: &SpecFunConfig) -> Result<f64> {
    if j < 1 {
        return Err(crate::Error::Domain(format!("hyp_u_b0 requires j >= 1, got {j}")));
    }
    if !(z > 0.0) {
        return Err(crate::Error::Domain(format!("hyp_u_b0 requires z > 0, got {z}")));
    }
    let jf = j as f64;
    let t_star = peak(jf, z);
    let m = log_integrand(jf, z, t_star.max(0.0)).max(f64::NEG_INFINITY);
    let m = if t_star == 0.0 { 0.0 } else { m };
    let f = |t: f64| {
        let e = log_integrand(jf, z, t) - m;
        e.exp()
    };

    // Panel boundaries: a uniform grid plus knots anchored on the peak so
    // the bisection starts inside the bump even when it is narrow.
    let mut boundaries = uniform_grid(0.0, 1.0, config.quad_points);
    if t_star > 0.0 {
        for knot in [0.5 * t_star, t_star, t_star + 0.5 * (1.0 - t_star)] {
            boundaries.push(knot);
        }
        boundaries.sort_by(|a, b| a.partial_cmp(b).unwrap());
        boundaries.dedup();
    }

    // Scale for the absolute tolerance: composite-Simpson sweep of the
    // same panels.
    let mut coarse = 0.0;
    for w in boundaries.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        coarse += (w[1] - w[0]) / 6.0 * (f(w[0]) + 4.0 * f(mid) + f(w[1]));
    }
    let tol = config.rel_tol * coarse.max(f64::MIN_POSITIVE);

    let integral = adaptive_simpson_panels(f, &boundaries, tol, 1)?;
    Ok(m + integral.ln())
}

/// Γ(j)·U(j, 0, z) for j ≥ 1, z > 0.
pub fn hyp_u_b0(j: u64, z: f64, config: &SpecFunConfig) -> Result<f64> {
    Ok(ln_hyp_u_b0(j, z, config)?.exp())
}
