//! From-scratch special functions used by the closed-form limit
//! distributions and their tail asymptotics: log-Gamma, Beta, the Gauss
//! hypergeometric series ₂F₁, the fused confluent product Γ(j)·U(j,0,z),
//! and the modified Bessel function K₁ with its large-parameter use in
//! the critical-regime asymptote.
//!
//! All functions are pure; configuration is passed explicitly where a
//! series or quadrature needs a truncation policy.

mod bessel;
mod gamma;
mod hyp2f1;
mod hyp_u;

pub use bessel::{bessel_k1, u_asymptotic_b0, CriticalAsymptoticTerms};
pub use gamma::{beta, ln_beta, ln_gamma};
pub use hyp2f1::gauss_2f1;
pub use hyp_u::{hyp_u_b0, ln_hyp_u_b0};

use crate::{Error, Result};

/// Truncation policy for series and quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunConfig {
    /// Relative tolerance for series truncation and quadrature refinement.
    pub rel_tol: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
    /// Number of points in the initial quadrature panel grid.
    pub quad_points: usize,
}

impl SpecFunConfig {
    pub fn new(rel_tol: f64, max_terms: usize, quad_points: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1e-3) {
            return Err(Error::Domain(format!(
                "rel_tol must lie in (0, 1e-3), got {rel_tol}"
            )));
        }
        if max_terms < 100 {
            return Err(Error::Domain(format!(
                "max_terms must be at least 100, got {max_terms}"
            )));
        }
        if quad_points < 32 {
            return Err(Error::Domain(format!(
                "quad_points must be at least 32, got {quad_points}"
            )));
        }
        Ok(SpecFunConfig { rel_tol, max_terms, quad_points })
    }
}

impl Default for SpecFunConfig {
    fn default() -> Self {
        SpecFunConfig { rel_tol: 1e-10, max_terms: 1_000_000, quad_points: 257 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_out_of_range() {
        assert!(SpecFunConfig::new(1e-2, 1000, 257).is_err());
        assert!(SpecFunConfig::new(0.0, 1000, 257).is_err());
        assert!(SpecFunConfig::new(1e-10, 50, 257).is_err());
        assert!(SpecFunConfig::new(1e-10, 1000, 16).is_err());
        assert!(SpecFunConfig::new(1e-10, 1000, 257).is_ok());
    }

    #[test]
    fn default_is_valid() {
        let d = SpecFunConfig::default();
        assert!(SpecFunConfig::new(d.rel_tol, d.max_terms, d.quad_points).is_ok());
    }
}
