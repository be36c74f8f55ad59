//! The limit in-degree distribution (p_j) of a uniformly chosen vertex,
//! evaluated exactly in all four parameter regimes, together with tail
//! asymptotics, moments, and an independent Laplace-integral oracle.
//!
//! Writing γ for the rate exponent of the active regime and z for its
//! geometric argument, the closed forms are Beta-function expressions in
//! the no-detachment case, Beta × ₂F₁ products in the super- and
//! subcritical cases, and Γ(j)·U(j,0,λ₁/λ₂) in the critical case. The
//! oracle route instead integrates the transient distribution of a
//! single birth-death line against the exponential age profile of
//! households:
//!
//!   p_j = λ₁ ∫₀^∞ e^{-λ₁ v} P(Z_v = j) dv.
//!
//! Everything tail-sensitive is computed in log space: the subcritical
//! geometric prefactor underflows f64 near j ≈ 700 already for ratio ½.

use crate::model::{ModelParams, Regime};
use crate::numeric::{ln_abs_exp_diff, ln_abs_one_minus_exp};
use crate::quad::{adaptive_simpson_panels, uniform_grid};
use crate::specfun::{gauss_2f1, ln_beta, ln_gamma, ln_hyp_u_b0, SpecFunConfig};
use crate::{Error, Result};

/// A truncated probability mass function over degrees with a certified
/// bound on the mass beyond the truncation point.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    /// values[j] = p_j for j = 0..=j_max.
    pub values: Vec<f64>,
    /// Upper bound on Σ_{j > j_max} p_j.
    pub tail_mass: f64,
}

impl Pmf {
    pub fn j_max(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// Σ values + tail_mass.
    pub fn total_with_tail(&self) -> f64 {
        self.values.iter().sum::<f64>() + self.tail_mass
    }
}

/// A finite moment or the explicit infinity marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    Finite(f64),
    Infinite,
}

impl Moment {
    pub fn as_finite(&self) -> Option<f64> {
        match self {
            Moment::Finite(x) => Some(*x),
            Moment::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Moment::Infinite)
    }
}

/// Parameters of the tail law p_j ~ constant · ratio^{j+1} · j^{power}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailAsymptotic {
    pub constant: f64,
    pub power_exponent: f64,
    /// (λ₂/μ₂) per unit j in the subcritical regime; 1 otherwise.
    pub geometric_ratio: f64,
}

impl TailAsymptotic {
    /// ln of the asymptote at j ≥ 1.
    pub fn ln_value(&self, j: u64) -> f64 {
        self.constant.ln()
            + (j as f64 + 1.0) * self.geometric_ratio.ln()
            + self.power_exponent * (j as f64).ln()
    }

    pub fn value(&self, j: u64) -> f64 {
        self.ln_value(j).exp()
    }
}

/// Regime of the given parameters (see [`ModelParams::regime`]).
pub fn classify_regime(params: &ModelParams) -> Regime {
    params.regime()
}

/// The regime exponent γ: λ₁/λ₂ without detachment, λ₁/|λ₂-μ₂| otherwise.
fn regime_exponent(params: &ModelParams) -> f64 {
    match params.regime() {
        Regime::NoDetachment => params.lambda1() / params.lambda2(),
        Regime::Supercritical => params.lambda1() / (params.lambda2() - params.mu2()),
        Regime::Subcritical => params.lambda1() / (params.mu2() - params.lambda2()),
        Regime::Critical => params.lambda1() / params.lambda2(),
    }
}

/// ln p_j (−∞ encodes p_j = 0).
pub fn ln_limit_pj(params: &ModelParams, j: u64, config: &SpecFunConfig) -> Result<f64> {
    let (l1, l2, m2) = (params.lambda1(), params.lambda2(), params.mu2());
    match params.regime() {
        Regime::NoDetachment => {
            if j == 0 {
                Ok(f64::NEG_INFINITY)
            } else {
                let a = l1 / l2;
                Ok((l1 / l2).ln() + ln_beta(j as f64, 1.0 + a)?)
            }
        }
        Regime::Supercritical => {
            let g = l1 / (l2 - m2);
            let z = m2 / l2;
            if j == 0 {
                let f = gauss_2f1(1.0, g, 2.0 + g, z, config)?;
                Ok((m2 * l1 / (l2 * (l2 - m2))).ln() + ln_beta(2.0, g)? + f.ln())
            } else {
                let jf = j as f64;
                let f = gauss_2f1(jf + 1.0, 1.0 + g, jf + 1.0 + g, z, config)?;
                Ok((l1 * (l2 - m2) / (l2 * l2)).ln() + ln_beta(jf, 1.0 + g)? + f.ln())
            }
        }
        Regime::Subcritical => {
            let g = l1 / (m2 - l2);
            let z = l2 / m2;
            if j == 0 {
                let f = gauss_2f1(1.0, g, 2.0 + g, z, config)?;
                Ok((l1 / (m2 - l2)).ln() + ln_beta(2.0, g)? + f.ln())
            } else {
                let jf = j as f64;
                let f = gauss_2f1(jf + 1.0, 1.0 + g, jf + 1.0 + g, z, config)?;
                Ok((jf + 1.0) * z.ln()
                    + (l1 * (m2 - l2) / (l2 * l2)).ln()
                    + ln_beta(jf, 1.0 + g)?
                    + f.ln())
            }
        }
        Regime::Critical => {
            let z = l1 / l2;
            if j == 0 {
                // p_0 = U(1, 0, z) and Γ(1) = 1.
                ln_hyp_u_b0(1, z, config)
            } else {
                Ok((l1 / l2).ln() + ln_hyp_u_b0(j, z, config)?)
            }
        }
    }
}

/// p_j through the regime closed form with the default configuration.
pub fn limit_pj(params: &ModelParams, j: u64) -> Result<f64> {
    Ok(ln_limit_pj(params, j, &SpecFunConfig::default())?.exp())
}

/// p_0..p_{j_max} with a certified upper bound on the remaining mass.
pub fn limit_pmf(params: &ModelParams, j_max: u64) -> Result<Pmf> {
    if j_max < 1 {
        return Err(Error::Domain(format!("limit_pmf requires j_max >= 1, got {j_max}")));
    }
    let config = SpecFunConfig::default();
    let mut values = Vec::with_capacity(j_max as usize + 1);
    for j in 0..=j_max {
        values.push(ln_limit_pj(params, j, &config)?.exp());
    }
    let tail_mass = match params.regime() {
        Regime::Critical => critical_tail(params, &values, j_max, &config)?,
        _ => {
            let ta = tail_asymptotic(params)?;
            power_tail_bound(&ta, j_max)
        }
    };
    Ok(Pmf { values, tail_mass })
}

/// Integral-comparison tail bound for the power-law and geometric
/// regimes, doubled as a safety factor against pre-asymptotic deviation.
fn power_tail_bound(ta: &TailAsymptotic, j_max: u64) -> f64 {
    let s = -ta.power_exponent;
    let jf = j_max as f64;
    let base = ta.constant * ta.geometric_ratio.powf(jf + 1.0) * jf.powf(-s);
    let factor = if ta.geometric_ratio == 1.0 {
        jf / (s - 1.0)
    } else {
        1.0 / (1.0 - ta.geometric_ratio)
    };
    2.0 * base * factor
}

/// Critical-regime tail: extend the summation past j_max until the terms
/// are negligible against the running total, then close with a doubled
/// quasi-geometric estimate from the last term ratio.
fn critical_tail(
    params: &ModelParams,
    values: &[f64],
    j_max: u64,
    config: &SpecFunConfig,
) -> Result<f64> {
    let mut total: f64 = values.iter().sum();
    let mut prev = values[values.len() - 1];
    let mut ext = 0.0;
    let mut j = j_max;
    loop {
        j += 1;
        let p = ln_limit_pj(params, j, config)?.exp();
        ext += p;
        total += p;
        if p < 1e-9 * total || p == 0.0 {
            let ratio = if prev > 0.0 { (p / prev).min(0.999_999) } else { 0.0 };
            return Ok(ext + 2.0 * p * ratio / (1.0 - ratio));
        }
        prev = p;
        if j > j_max + 5_000_000 {
            return Err(Error::QuadratureFailure { a: j_max as f64, b: j as f64 });
        }
    }
}

/// A pmf truncated adaptively so that |Σ p_j + tail_mass − 1| < 1e-6.
pub fn limit_pmf_certified(params: &ModelParams) -> Result<Pmf> {
    const BUDGET: f64 = 5e-7;
    let j_max = match params.regime() {
        Regime::Critical => 256,
        _ => {
            let ta = tail_asymptotic(params)?;
            if ta.geometric_ratio < 1.0 {
                let mut j = 64u64;
                while power_tail_bound(&ta, j) >= BUDGET {
                    j *= 2;
                }
                j
            } else {
                // Solve 2c·J^{1-s}/(s-1) < budget for J.
                let s = -ta.power_exponent;
                let j = (2.0 * ta.constant / ((s - 1.0) * BUDGET)).powf(1.0 / (s - 1.0));
                (j.ceil() as u64).max(1024)
            }
        }
    };
    limit_pmf(params, j_max)
}

/// Transient distribution P(Z_v = j) of the linear birth-death process
/// with rates (λ₂, μ₂) started at one individual.
pub fn transient_prob(params: &ModelParams, v: f64, j: u64) -> Result<f64> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("transient_prob requires v >= 0, got {v}")));
    }
    Ok(transient_prob_raw(params.lambda2(), params.mu2(), v, j))
}

/// Unchecked core of [`transient_prob`]; λ₂ > 0, μ₂ ≥ 0, v ≥ 0.
fn transient_prob_raw(l2: f64, m2: f64, v: f64, j: u64) -> f64 {
    if v == 0.0 {
        return if j == 1 { 1.0 } else { 0.0 };
    }
    if m2 == 0.0 {
        // Pure birth: geometric with success probability e^{-λ₂v}.
        if j == 0 {
            return 0.0;
        }
        let ln_p = -l2 * v + (j as f64 - 1.0) * ln_abs_one_minus_exp(-l2 * v);
        return ln_p.exp();
    }
    if l2 == m2 {
        let a = l2 * v;
        if j == 0 {
            return a / (1.0 + a);
        }
        let ln_p = (j as f64 - 1.0) * a.ln() - (j as f64 + 1.0) * a.ln_1p();
        return ln_p.exp();
    }
    let delta = l2 - m2;
    if j == 0 {
        // Extinction probability; formed with exponentials ≤ 1 in both
        // directions of the drift.
        return if delta > 0.0 {
            let e = (-delta * v).exp();
            m2 * (1.0 - e) / (l2 - m2 * e)
        } else {
            let g = (delta * v).exp();
            m2 * (1.0 - g) / (m2 - l2 * g)
        };
    }
    let jf = j as f64;
    let ln_p = if delta > 0.0 {
        // δ² e^{-δv} λ₂^{j-1} (1-e^{-δv})^{j-1} / (λ₂ - μ₂ e^{-δv})^{j+1}
        let ln_one_minus = ln_abs_one_minus_exp(-delta * v);
        let ln_denom = ln_abs_exp_diff(l2.ln(), m2.ln() - delta * v);
        2.0 * delta.ln() - delta * v + (jf - 1.0) * (l2.ln() + ln_one_minus)
            - (jf + 1.0) * ln_denom
    } else {
        // Mirror form with e^{δv} ≤ 1.
        let ln_one_minus = ln_abs_one_minus_exp(delta * v);
        let ln_denom = ln_abs_exp_diff(m2.ln(), l2.ln() + delta * v);
        2.0 * (-delta).ln() + delta * v + (jf - 1.0) * (l2.ln() + ln_one_minus)
            - (jf + 1.0) * ln_denom
    };
    ln_p.exp()
}

/// Independent oracle for p_j: adaptive quadrature of
/// λ₁ ∫₀^V e^{-λ₁v} P(Z_v = j) dv with V chosen so the discarded
/// exponential mass is below 1e-12.
pub fn limit_pmf_oracle(params: &ModelParams, j: u64) -> Result<f64> {
    let config = SpecFunConfig::default();
    let l1 = params.lambda1();
    let (l2, m2) = (params.lambda2(), params.mu2());
    let v_max = (1e12f64).ln() / l1;
    let f = |v: f64| l1 * (-l1 * v).exp() * transient_prob_raw(l2, m2, v, j);
    let grid = uniform_grid(0.0, v_max, config.quad_points);
    // Composite sweep for the tolerance scale, then the adaptive pass.
    let mut coarse = 0.0;
    for w in grid.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        coarse += (w[1] - w[0]) / 6.0 * (f(w[0]) + 4.0 * f(mid) + f(w[1]));
    }
    if coarse == 0.0 {
        // Identically zero integrand (p_0 without detachment).
        return Ok(0.0);
    }
    let tol = 1e-9 * coarse;
    adaptive_simpson_panels(f, &grid, tol, 1)
}

/// Tail law of Theorem-style form p_j ~ c · r^{j+1} · j^{-s} for the
/// three non-critical regimes.
///
/// The subcritical constant is the normalization-consistent one (it is
/// the j → ∞ limit of p_j over the rest of the asymptote, cross-checked
/// against the Laplace-integral oracle); see the regression tests.
pub fn tail_asymptotic(params: &ModelParams) -> Result<TailAsymptotic> {
    let (l1, l2, m2) = (params.lambda1(), params.lambda2(), params.mu2());
    let g = regime_exponent(params);
    match params.regime() {
        Regime::NoDetachment => Ok(TailAsymptotic {
            constant: l1 / l2 * ln_gamma(1.0 + g)?.exp(),
            power_exponent: -(1.0 + g),
            geometric_ratio: 1.0,
        }),
        Regime::Supercritical => Ok(TailAsymptotic {
            constant: l1 / l2 * (l2 / (l2 - m2)).powf(g) * ln_gamma(1.0 + g)?.exp(),
            power_exponent: -(1.0 + g),
            geometric_ratio: 1.0,
        }),
        Regime::Subcritical => Ok(TailAsymptotic {
            constant: l1 * m2 / (l2 * l2) * (m2 / (m2 - l2)).powf(g) * ln_gamma(1.0 + g)?.exp(),
            power_exponent: -(1.0 + g),
            geometric_ratio: l2 / m2,
        }),
        Regime::Critical => Err(Error::UnsupportedRegime(
            Regime::Critical,
            "the critical regime has no single power-or-geometric tail law".into(),
        )),
    }
}

/// One row of the critical-decay diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalDecayRecord {
    pub j: u64,
    /// p_j · j^m.
    pub poly_scaled: f64,
    /// p_j · e^{εj}.
    pub exp_scaled: f64,
}

/// Scaled sequences p_j·j^m and p_j·e^{εj} over a strictly increasing
/// grid, so callers can assert the eventual monotone decrease of the
/// polynomial scaling and the eventual monotone increase of the
/// exponential scaling in the critical regime.
pub fn evaluate_critical_decay(
    params: &ModelParams,
    j_grid: &[u64],
    m: u32,
    epsilon: f64,
) -> Result<Vec<CriticalDecayRecord>> {
    if params.regime() != Regime::Critical {
        return Err(Error::UnsupportedRegime(
            params.regime(),
            "critical-decay diagnostics require lambda2 == mu2 > 0".into(),
        ));
    }
    if j_grid.is_empty() || j_grid[0] < 1 || j_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(
            "j_grid must be strictly increasing with entries >= 1".into(),
        ));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let config = SpecFunConfig::default();
    j_grid
        .iter()
        .map(|&j| {
            let ln_p = ln_limit_pj(params, j, &config)?;
            let jf = j as f64;
            Ok(CriticalDecayRecord {
                j,
                poly_scaled: (ln_p + f64::from(m) * jf.ln()).exp(),
                exp_scaled: (ln_p + epsilon * jf).exp(),
            })
        })
        .collect()
}

/// Mean of the limit distribution:
/// λ₁/(λ₁-(λ₂-μ₂)) when λ₂ < μ₂ or 0 < λ₂-μ₂ < λ₁, exactly 1 at
/// balance, infinite otherwise.
pub fn expectation(params: &ModelParams) -> Moment {
    let d = params.lambda2() - params.mu2();
    let l1 = params.lambda1();
    if d == 0.0 {
        Moment::Finite(1.0)
    } else if d < 0.0 || d < l1 {
        Moment::Finite(l1 / (l1 - d))
    } else {
        Moment::Infinite
    }
}

/// Variance of the limit distribution.
///
/// The finite off-balance case requires the second moment to converge,
/// which happens exactly when λ₂ - μ₂ < λ₁/2 (the denominator
/// λ₁ - 2(λ₂-μ₂) of the closed form changes sign right there).
pub fn variance(params: &ModelParams) -> Moment {
    let (l1, l2, m2) = (params.lambda1(), params.lambda2(), params.mu2());
    let d = l2 - m2;
    if d == 0.0 {
        Moment::Finite(2.0 * l2 / l1)
    } else if l1 - 2.0 * d > 0.0 {
        let second = (2.0 * l1 * l2 / (l1 - 2.0 * d) - l1 * (l2 + m2) / (l1 - d)) / d;
        let mean = l1 / (l1 - d);
        Moment::Finite(second - mean * mean)
    } else {
        Moment::Infinite
    }
}

/// Σ jᵒʳᵈᵉʳ · p_j by direct summation of the closed forms, the
/// independent route against [`expectation`] / [`variance`].
///
/// In the fast-decay regimes (subcritical, critical) the series is summed
/// until the terms vanish against the total. In the power-law regimes the
/// partial sum is closed with a midpoint-integral tail estimate and the
/// truncation point doubles until the result stabilizes to `rel_tol`.
pub fn moment_by_summation(params: &ModelParams, order: u32, rel_tol: f64) -> Result<f64> {
    let finite = match order {
        1 => !expectation(params).is_infinite(),
        2 => {
            // Second raw moment is finite iff the variance is.
            !variance(params).is_infinite()
        }
        _ => return Err(Error::Domain(format!("order must be 1 or 2, got {order}"))),
    };
    if !finite {
        return Err(Error::Domain(
            "moment_by_summation requires a finite moment in this regime".into(),
        ));
    }
    let config = SpecFunConfig::default();
    let pow = f64::from(order);
    match params.regime() {
        Regime::Subcritical | Regime::Critical => {
            let mut sum = 0.0;
            let mut j = 1u64;
            loop {
                let term = (ln_limit_pj(params, j, &config)? + pow * (j as f64).ln()).exp();
                sum += term;
                if j > 32 && term < 1e-16 * sum.max(f64::MIN_POSITIVE) {
                    return Ok(sum);
                }
                j += 1;
            }
        }
        Regime::NoDetachment | Regime::Supercritical => {
            let ta = tail_asymptotic(params)?;
            let s = -ta.power_exponent;
            let estimate = |j_cut: u64| -> Result<f64> {
                let mut sum = 0.0;
                for j in 1..=j_cut {
                    sum += (ln_limit_pj(params, j, &config)? + pow * (j as f64).ln()).exp();
                }
                // Midpoint-integral estimate of Σ_{j>J} c·j^{pow-s}.
                let a = s - pow - 1.0;
                let tail = ta.constant * (j_cut as f64 + 0.5).powf(-a) / a;
                Ok(sum + tail)
            };
            let mut j_cut = 4096u64;
            let mut prev = estimate(j_cut)?;
            loop {
                j_cut *= 2;
                let next = estimate(j_cut)?;
                if (next - prev).abs() <= 0.3 * rel_tol * next.abs() {
                    return Ok(next);
                }
                prev = next;
                if j_cut > 1 << 26 {
                    return Err(Error::NonConvergence { max_terms: j_cut as usize });
                }
            }
        }
    }
}
