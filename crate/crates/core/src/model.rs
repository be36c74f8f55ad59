//! Model parameters and regime classification.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// The rate triple of the model: λ₁ drives the appearance of new vertices
/// (households), λ₂ drives edge attachment (births), μ₂ drives edge
/// detachment (deaths).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    lambda1: f64,
    lambda2: f64,
    mu2: f64,
}

impl ModelParams {
    /// Validated constructor: λ₁ > 0, λ₂ > 0, μ₂ ≥ 0 and all finite.
    pub fn new(lambda1: f64, lambda2: f64, mu2: f64) -> Result<Self> {
        if !(lambda1 > 0.0 && lambda1.is_finite()) {
            return Err(Error::Domain(format!("lambda1 must be positive, got {lambda1}")));
        }
        if !(lambda2 > 0.0 && lambda2.is_finite()) {
            return Err(Error::Domain(format!("lambda2 must be positive, got {lambda2}")));
        }
        if !(mu2 >= 0.0 && mu2.is_finite()) {
            return Err(Error::Domain(format!("mu2 must be nonnegative, got {mu2}")));
        }
        Ok(ModelParams { lambda1, lambda2, mu2 })
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn mu2(&self) -> f64 {
        self.mu2
    }

    /// The tail regime of the limit in-degree distribution. Boundaries
    /// are exact comparisons of the stored values: callers wanting
    /// critical behaviour must pass exactly equal rates.
    pub fn regime(&self) -> Regime {
        if self.mu2 == 0.0 {
            Regime::NoDetachment
        } else if self.mu2 < self.lambda2 {
            Regime::Supercritical
        } else if self.mu2 > self.lambda2 {
            Regime::Subcritical
        } else {
            Regime::Critical
        }
    }
}

/// The four asymptotic regimes of the limit distribution: pure power law
/// without detachment, power law when attachment outweighs detachment,
/// geometric-times-power decay when detachment dominates, and the
/// intermediate decay at exact balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// μ₂ = 0.
    NoDetachment,
    /// 0 < μ₂ < λ₂.
    Supercritical,
    /// μ₂ > λ₂ > 0.
    Subcritical,
    /// μ₂ = λ₂ > 0.
    Critical,
}
