//! Two-sided Riemann–Liouville fractional derivative.
//!
//! For base point `a`, order `beta >= 0`, branch `m` in `{0, 1}` and
//! `n = floor(beta) + 1`,
//!
//! ```text
//! D f(x) = 1/Gamma(n - beta) d^n/dx^n  int_a^x f(t) (x - t)^n |x - t|^(-beta-1) sign^(m-1)(x - t) dt
//! ```
//!
//! For `x >= a` this is the left Riemann–Liouville derivative and for
//! `x < a` it is `(-1)^m` times the right one. On powers `|x - a|^p` it
//! has the closed form [`power_rule`]; [`frac_derivative_numeric`] is an
//! independent quadrature + finite-difference evaluator used to check it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_weighted, QuadConfig};
use crate::special::{gamma, gamma_ratio, is_gamma_pole};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracDerivParams {
    a: f64,
    beta: f64,
    m: u8,
    n: u32,
}

pub(crate) fn check_branch(m: u8) -> Result<()> {
    if m > 1 {
        return Err(Error::Validation(format!("m = {m}, expected 0 or 1")));
    }
    Ok(())
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::Validation(format!("beta = {beta} must be >= 0")));
    }
    Ok(())
}

impl FracDerivParams {
    pub fn new(a: f64, beta: f64, m: u8) -> Result<Self> {
        check_beta(beta)?;
        check_branch(m)?;
        if !a.is_finite() {
            return Err(Error::Validation(format!("base point a = {a}")));
        }
        Ok(Self {
            a,
            beta,
            m,
            n: beta.floor() as u32 + 1,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    /// `floor(beta) + 1`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_integer_order(&self) -> bool {
        self.beta == self.beta.floor()
    }
}

/// `sign(x)` with `sign(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `sign(x)^k` with `sign^0 = 1` everywhere, including at 0.
pub fn sign_pow(x: f64, k: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let s = sign(x);
    if k.is_multiple_of(2) {
        s * s
    } else {
        s
    }
}

/// Signed power `|x|^p sign(x)`, with `|0|^0 = 1`.
pub fn signed_power(x: f64, p: f64) -> Result<f64> {
    if x == 0.0 && p < 0.0 {
        return Err(Error::numerical(
            format!("signed power of 0 with negative exponent {p}"),
            None,
        ));
    }
    Ok(x.abs().powf(p) * sign(x))
}

/// Falling factorial `(alpha)_k = alpha (alpha - 1) ... (alpha - k + 1)`,
/// by the multiplicative recurrence. Exactly 0 for integer `alpha >= 0`
/// and `k > alpha`.
pub fn falling_factorial(alpha: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for j in 0..k {
        acc *= alpha - j as f64;
    }
    acc
}

/// `(alpha)_k / k!`, by the recurrence `c_{k+1} = c_k (alpha - k) / (k + 1)`
/// so large `k` never overflows.
pub fn binomial_coefficient(alpha: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for j in 0..k {
        acc *= (alpha - j as f64) / (j as f64 + 1.0);
    }
    acc
}

/// Closed-form fractional derivative of `x -> |x - a|^p`:
/// `Gamma(p+1) / Gamma(p-beta+1) |x-a|^(p-beta) sign^m(x-a)`.
///
/// The coefficient is 0 when `p - beta + 1` is a pole of gamma. At `x = a`
/// the value is 0 for `p > beta`, the coefficient times `sign^m(0)` for
/// `p = beta`, and singular for `p < beta`.
pub fn power_rule(p: f64, params: &FracDerivParams, x: f64) -> Result<f64> {
    if !(p > -1.0) {
        return Err(Error::Domain(format!("power rule needs p > -1, got {p}")));
    }
    let beta = params.beta;
    let m = params.m as u32;
    let coefficient = if beta == 0.0 {
        1.0
    } else {
        gamma_ratio(p + 1.0, p - beta + 1.0)
    };
    let d = x - params.a;
    if d == 0.0 {
        if p > beta {
            return Ok(0.0);
        }
        if p == beta {
            return Ok(coefficient * sign_pow(0.0, m));
        }
        return Err(Error::numerical(
            format!("power rule is singular at x = a for p = {p} < beta = {beta}"),
            None,
        ));
    }
    if coefficient == 0.0 {
        return Ok(0.0);
    }
    Ok(coefficient * d.abs().powf(p - beta) * sign_pow(d, m))
}

/// Central difference of order `order` at `x` with step `h`; the stencil
/// points are `x + (order/2 - k) h` for `k = 0..=order`.
fn central_difference<F>(g: &F, x: f64, h: f64, order: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if order == 0 {
        return g(x);
    }
    let half = order as f64 / 2.0;
    let mut acc = 0.0;
    let mut binom = 1.0;
    for k in 0..=order {
        let y = x + (half - k as f64) * h;
        let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sgn * binom * g(y)?;
        binom = binom * (order - k) as f64 / (k + 1) as f64;
    }
    Ok(acc / h.powi(order as i32))
}

/// Order-`order` derivative by central differences with one Richardson
/// level: `(4 D(h/2) - D(h)) / 3`.
fn richardson_derivative<F>(g: &F, x: f64, h: f64, order: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if order == 0 {
        return g(x);
    }
    let coarse = central_difference(g, x, h, order)?;
    let fine = central_difference(g, x, 0.5 * h, order)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Finite-difference step used by [`frac_derivative_numeric`].
///
/// The inner integral behaves like `|y - a|^(n - beta)` near `a`, so for
/// fractional orders the step shrinks with the distance to `a`; this keeps
/// the relative truncation error near `1e-8` and the stencil on one side
/// of `a`. Integer orders have no singularity and use a fixed scale.
pub fn default_step(x: f64, a: f64, integer_order: bool) -> f64 {
    let d = (x - a).abs();
    if integer_order {
        (d + 1.0) * 1e-2
    } else {
        d.min(1.0) * 1e-2
    }
}

/// Numeric evaluation of the fractional derivative of `f` at `x`.
///
/// For non-integer `beta` the inner integral is rewritten with
/// `t = y - (y - a) tau`, which turns it into
/// `sign^(n+m)(y-a) |y-a|^(n-beta) int_0^1 f(y - (y-a) tau) tau^(n-beta-1) dtau`,
/// integrated against the weight `tau^(n-beta-1)`. The n-th derivative in
/// `y` is taken by central differences with step [`default_step`] and one
/// Richardson level. Integer `beta` reduces to
/// `sign^(m+n-1)(x-a) f^(beta)(x)`.
///
/// Fractional orders are undefined at `x = a` here (the inner integral is
/// not differentiable there) and give a domain error.
pub fn frac_derivative_numeric<F>(
    f: F,
    params: &FracDerivParams,
    x: f64,
    quad: &QuadConfig,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let a = params.a;
    let beta = params.beta;
    let n = params.n;
    let m = params.m as u32;
    let h = default_step(x, a, params.is_integer_order());

    if params.is_integer_order() {
        let order = beta as u32;
        let g = |y: f64| Ok(f(y));
        let derivative = richardson_derivative(&g, x, h, order)?;
        return Ok(sign_pow(x - a, m + n - 1) * derivative);
    }

    if x == a {
        return Err(Error::Domain(
            "numeric fractional derivative is undefined at x = a".into(),
        ));
    }
    let c = n as f64 - beta - 1.0;
    let inv_gamma = 1.0 / gamma(n as f64 - beta);
    let inner = |y: f64| -> Result<f64> {
        let d = y - a;
        if d == 0.0 {
            return Ok(0.0);
        }
        let integrand = |tau: f64, one_minus_tau: f64| {
            // Evaluate t from whichever endpoint is closer for precision.
            let t = if tau <= 0.5 {
                y - d * tau
            } else {
                a + d * one_minus_tau
            };
            f(t)
        };
        let q = integrate_weighted(integrand, c, quad)?;
        Ok(inv_gamma * sign_pow(d, n + m) * d.abs().powf(n as f64 - beta) * q.value)
    };
    richardson_derivative(&inner, x, h, n)
}

/// Partial sum `sum_{k=0}^N (alpha)_k/k! |b|^(alpha-k) sign^k(b) x^k` of the
/// binomial series of `|x + b|^alpha`, valid for `|x| <= |b|`.
pub fn binomial_series_partial(x: f64, b: f64, alpha: f64, n_terms: u32) -> Result<f64> {
    if b == 0.0 {
        return Err(Error::Domain("binomial series needs b != 0".into()));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
    }
    if x.abs() > b.abs() {
        return Err(Error::Domain(format!(
            "|x| = {} exceeds |b| = {}: outside the convergence region",
            x.abs(),
            b.abs()
        )));
    }
    // Each term is (alpha)_k/k! |b|^alpha (x/b)^k, which equals the form
    // above since |b|^(-k) sign^k(b) = b^(-k).
    let ratio = x / b;
    let scale = b.abs().powf(alpha);
    let mut coefficient = 1.0;
    let mut power = 1.0;
    let mut sum = 0.0;
    for k in 0..=n_terms {
        sum += coefficient * power;
        coefficient *= (alpha - k as f64) / (k as f64 + 1.0);
        power *= ratio;
        if coefficient == 0.0 {
            break;
        }
    }
    Ok(scale * sum)
}

/// `true` when the gamma ratio `Gamma(p+1)/Gamma(p-beta+1)` vanishes.
pub fn power_rule_vanishes(p: f64, beta: f64) -> bool {
    is_gamma_pole(p - beta + 1.0)
}
