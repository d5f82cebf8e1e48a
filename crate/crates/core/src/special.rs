//! Gamma-function helpers on the whole real line.
//!
//! Positive arguments go through `statrs`' Lanczos log-gamma; negative
//! non-integer arguments use the reflection formula
//! `Gamma(x) Gamma(1 - x) = pi / sin(pi x)` on top of it.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma as ln_gamma_pos;

/// `true` when `x` is a pole of the gamma function (0, -1, -2, ...).
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `(ln |Gamma(x)|, sign Gamma(x))`. Returns `None` at the poles.
pub fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if is_gamma_pole(x) || !x.is_finite() {
        return None;
    }
    if x > 0.0 {
        return Some((ln_gamma_pos(x), 1.0));
    }
    // x < 0, not an integer.
    let s = (PI * x).sin();
    let ln_abs = PI.ln() - s.abs().ln() - ln_gamma_pos(1.0 - x);
    Some((ln_abs, s.signum()))
}

/// Gamma function with reflection for negative non-integer arguments.
/// Poles map to infinity.
pub fn gamma(x: f64) -> f64 {
    match ln_gamma_signed(x) {
        Some((l, s)) => s * l.exp(),
        None => f64::INFINITY,
    }
}

/// `Gamma(num) / Gamma(den)` with the reciprocal-gamma convention: a pole
/// in the denominator gives 0. A pole in the numerator only is infinite.
pub fn gamma_ratio(num: f64, den: f64) -> f64 {
    if num == den {
        return 1.0;
    }
    match (ln_gamma_signed(num), ln_gamma_signed(den)) {
        (_, None) => 0.0,
        (None, Some(_)) => f64::INFINITY,
        (Some((ln_n, s_n)), Some((ln_d, s_d))) => s_n * s_d * (ln_n - ln_d).exp(),
    }
}
