//! Small numerically careful helpers shared across modules.

/// ln|1 - e^x|, stable for x near 0 and for large |x|.
pub(crate) fn ln_abs_one_minus_exp(x: f64) -> f64 {
    if x == 0.0 {
        f64::NEG_INFINITY
    } else if x < 0.0 {
        // 1 - e^x in (0, 1)
        (-f64::exp_m1(x)).ln()
    } else {
        // e^x - 1 = e^x (1 - e^-x)
        x + (-f64::exp_m1(-x)).ln()
    }
}

/// ln|e^a - e^b| without overflow; a and b are logs of positive quantities.
pub(crate) fn ln_abs_exp_diff(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + ln_abs_one_minus_exp(lo - hi)
}

/// Relative difference |x - y| / max(|x|, |y|), 0 when both are 0.
#[cfg(test)]
pub(crate) fn rel_diff(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}
