//! Modified Bessel function K₁ and the large-parameter Bessel form of
//! Γ(j)·U(j, 0, z).

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Small-argument route: the exact logarithmic series
///   K₁(x) = 1/x + ln(x/2)·I₁(x)
///           - (x/4)·Σₖ (ψ(k+1)+ψ(k+2))·qᵏ/(k!(k+1)!),  q = x²/4,
/// with ψ(k+1) = -γ + Hₖ. Converges to machine precision for x ≤ 2.
fn k1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut i1_sum = 0.0; // Σ q^k / (k!(k+1)!)
    let mut psi_sum = 0.0; // Σ (H_k + H_{k+1} - 2γ) q^k / (k!(k+1)!)
    let mut term = 1.0; // q^k / (k!(k+1)!)
    let mut harmonic = 0.0; // H_k
    for k in 0..64u32 {
        let kf = f64::from(k);
        let h_next = harmonic + 1.0 / (kf + 1.0); // H_{k+1}
        i1_sum += term;
        psi_sum += term * (harmonic + h_next - 2.0 * EULER_GAMMA);
        if term < 1e-18 * i1_sum.abs() {
            break;
        }
        term *= q / ((kf + 1.0) * (kf + 2.0));
        harmonic = h_next;
    }
    let i1 = 0.5 * x * i1_sum;
    1.0 / x + (0.5 * x).ln() * i1 - 0.25 * x * psi_sum
}

/// Large-argument route: truncated trapezoidal rule on the integral
/// representation K₁(x) = ∫₀^∞ e^{-x·cosh t} cosh t dt. The integrand is
/// even and decays double-exponentially, so the trapezoid converges
/// geometrically in the step size.
fn k1_integral(x: f64) -> f64 {
    // Beyond x·cosh t ≈ 746 the integrand underflows f64 entirely.
    let t_max = (746.0 / x).acosh();
    let n = 900usize;
    let h = t_max / n as f64;
    let mut sum = 0.5 * (-x).exp(); // t = 0 endpoint, cosh 0 = 1
    for i in 1..n {
        let t = i as f64 * h;
        let c = t.cosh();
        sum += (-x * c).exp() * c;
    }
    // t_max endpoint contributes e^{-746}, i.e. nothing representable.
    sum * h
}

/// Modified Bessel function of the second kind of order one, x > 0.
pub fn bessel_k1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("bessel_k1 requires x > 0, got {x}")));
    }
    if x <= 2.0 {
        Ok(k1_series(x))
    } else if x <= 700.0 {
        Ok(k1_integral(x))
    } else {
        // The result is at or below the subnormal range; two asymptotic
        // terms are already far more accurate than what f64 can hold.
        Ok((std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() * (1.0 + 3.0 / (8.0 * x)))
    }
}

/// The pieces of the large-j Bessel approximation of Γ(j)·U(j, 0, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalAsymptoticTerms {
    /// w(j) = arccosh(1 + z/(2j)).
    pub w: f64,
    /// β(j) = (w(j) + sinh w(j)) / 2.
    pub beta: f64,
    /// 2·e^{z/2}·√(2β·tanh(w/2))·K₁(2jβ), the leading term of the
    /// large-j behaviour of Γ(j)·U(j, 0, z). The bounded-but-unspecified
    /// remainder term is not computed.
    pub leading: f64,
}

/// Large-j Bessel form of Γ(j)·U(j, 0, z) for j ≥ 1, z > 0.
pub fn u_asymptotic_b0(j: u64, z: f64) -> Result<CriticalAsymptoticTerms> {
    if j < 1 {
        return Err(Error::Domain(format!("u_asymptotic_b0 requires j >= 1, got {j}")));
    }
    if !(z > 0.0) {
        return Err(Error::Domain(format!("u_asymptotic_b0 requires z > 0, got {z}")));
    }
    let jf = j as f64;
    // arccosh(1 + eps) = ln(1 + eps + sqrt(eps(2 + eps))), formed from eps
    // directly so small z/(2j) loses no precision.
    let eps = z / (2.0 * jf);
    let w = (eps + (eps * (2.0 + eps)).sqrt()).ln_1p();
    let beta = 0.5 * (w + w.sinh());
    let k1 = bessel_k1(2.0 * jf * beta)?;
    let leading = 2.0 * (0.5 * z).exp() * (2.0 * beta * (0.5 * w).tanh()).sqrt() * k1;
    Ok(CriticalAsymptoticTerms { w, beta, leading })
}
