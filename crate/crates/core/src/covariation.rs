//! Symmetric covariations `[X1, X2]_{alpha, beta, m}` and the quantities
//! built from them.
//!
//! The covariation integrates the magnitude-ordered kernel
//!
//! ```text
//! K(s1, s2) = |small|^beta |large|^(alpha - beta) sign^m(s1 s2)
//! ```
//!
//! against the spectral measure, where `small`/`large` are the smaller and
//! larger of `|s1|`, `|s2|` (ties go to the `|s1| <= |s2|` branch, which
//! gives the same value). Unlike the conventional covariation it is
//! defined for every `alpha` in `(0, 2]` and is symmetric in its arguments.

use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::frac_deriv::{check_beta, check_branch, power_rule, sign_pow, signed_power, FracDerivParams};
use crate::special::{gamma_ratio, is_gamma_pole};
use crate::spectral_measure::{check_alpha, dot, pushforward_linear, StableModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovariationParams {
    alpha: f64,
    beta: f64,
    m: u8,
}

impl CovariationParams {
    pub fn new(alpha: f64, beta: f64, m: u8) -> Result<Self> {
        check_alpha(alpha)?;
        check_beta(beta)?;
        check_branch(m)?;
        Ok(Self { alpha, beta, m })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m(&self) -> u8 {
        self.m
    }
}

/// Covariation kernel `K_{alpha,beta,m}(s1, s2)`.
///
/// Evaluated as `large^alpha (small/large)^beta sign^m(s1 s2)`, which is
/// the same quantity but cannot overflow when `beta > alpha` and the
/// arguments are small. When both arguments vanish the kernel is 0.
pub fn kernel(params: &CovariationParams, s1: f64, s2: f64) -> f64 {
    kernel_raw(params.alpha, params.beta, params.m as u32, s1, s2)
}

#[inline]
pub(crate) fn kernel_raw(alpha: f64, beta: f64, m: u32, s1: f64, s2: f64) -> f64 {
    let (a1, a2) = (s1.abs(), s2.abs());
    let (small, large) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
    if large == 0.0 {
        return 0.0;
    }
    large.powf(alpha) * (small / large).powf(beta) * sign_pow(s1 * s2, m)
}

fn require_bivariate(model: &StableModel) -> Result<()> {
    check_dim(2, model.dim())
}

/// `[X1, X2]_{alpha,beta,m} = integral of K(s1, s2) dGamma`.
pub fn symmetric_covariation(model: &StableModel, beta: f64, m: u8) -> Result<f64> {
    require_bivariate(model)?;
    let params = CovariationParams::new(model.alpha(), beta, m)?;
    model.measure().integrate(|s| kernel(&params, s[0], s[1]))
}

/// Conventional covariation of `X1` on `X2`, `integral s1 s2^<alpha-1>`.
/// Defined for `alpha` in `(1, 2]`.
pub fn conventional_covariation(model: &StableModel) -> Result<f64> {
    require_bivariate(model)?;
    let alpha = model.alpha();
    if alpha <= 1.0 {
        return Err(Error::Domain(format!(
            "conventional covariation needs alpha in (1, 2], got {alpha}"
        )));
    }
    let mut failure = None;
    let value = model.measure().integrate(|s| match signed_power(s[1], alpha - 1.0) {
        Ok(v) => s[0] * v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Covariation norm `||X_i||_alpha = (integral |s_i|^alpha)^(1/alpha)`.
pub fn covariation_norm(model: &StableModel, coordinate: usize) -> Result<f64> {
    if coordinate >= model.dim() {
        return Err(Error::Dimension {
            expected: model.dim(),
            got: coordinate + 1,
        });
    }
    let alpha = model.alpha();
    let integral = model
        .measure()
        .integrate(|s| s[coordinate].abs().powf(alpha))?;
    Ok(if integral == 0.0 {
        0.0
    } else {
        integral.powf(1.0 / alpha)
    })
}

/// Correlation-type coefficient
/// `[X1,X2] / min(||X2||^beta ||X1||^(alpha-beta), ||X1||^beta ||X2||^(alpha-beta))`
/// for `beta` in `[alpha/2, alpha]`.
pub fn correlation_coefficient(model: &StableModel, beta: f64, m: u8) -> Result<f64> {
    require_bivariate(model)?;
    let alpha = model.alpha();
    if !(beta >= 0.5 * alpha && beta <= alpha) {
        return Err(Error::Domain(format!(
            "correlation coefficient needs beta in [{}, {alpha}], got {beta}",
            0.5 * alpha
        )));
    }
    let n1 = covariation_norm(model, 0)?;
    let n2 = covariation_norm(model, 1)?;
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::Degenerate(
            "a coordinate has zero covariation norm".into(),
        ));
    }
    let cov = symmetric_covariation(model, beta, m)?;
    let denom = (n2.powf(beta) * n1.powf(alpha - beta)).min(n1.powf(beta) * n2.powf(alpha - beta));
    Ok(cov / denom)
}

/// `[sum a_k X_k, sum b_k X_k]_{alpha,beta,m}` as the kernel integral over
/// the original measure.
pub fn linear_combination_covariation(
    model: &StableModel,
    a: &[f64],
    b: &[f64],
    beta: f64,
    m: u8,
) -> Result<f64> {
    check_dim(model.dim(), a.len())?;
    check_dim(model.dim(), b.len())?;
    let params = CovariationParams::new(model.alpha(), beta, m)?;
    model
        .measure()
        .integrate(|s| kernel(&params, dot(a, s), dot(b, s)))
}

/// Same quantity through the pushforward spectral measure of `(Y1, Y2)`.
pub fn linear_combination_covariation_via_pushforward(
    model: &StableModel,
    a: &[f64],
    b: &[f64],
    beta: f64,
    m: u8,
) -> Result<f64> {
    let image = pushforward_linear(model, a, b, true)?;
    symmetric_covariation(&image.model, beta, m)
}

/// Outcome of [`covariation_limit_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    /// `[X1, X2]_{alpha,beta,m}` from the kernel integral.
    pub target: f64,
    pub epsilons: Vec<f64>,
    /// Fractional-derivative representation evaluated at each epsilon.
    pub values: Vec<f64>,
    /// `|values[i] - target|`.
    pub gaps: Vec<f64>,
    pub strictly_decreasing: bool,
}

impl LimitReport {
    pub fn final_gap(&self) -> Option<f64> {
        self.gaps.last().copied()
    }
}

/// `Gamma(alpha-beta+1)/Gamma(alpha+1)` times the power-rule derivative of
/// `|x - base|^alpha`, i.e. `|x - base|^(alpha-beta) sign^m(x - base)` up to
/// rounding. At a gamma pole the two ratios cancel and the normalized
/// value is used directly.
fn normalized_power_rule(alpha: f64, beta: f64, m: u8, base: f64, x: f64) -> Result<f64> {
    if is_gamma_pole(alpha - beta + 1.0) {
        let d = x - base;
        return Ok(d.abs().powf(alpha - beta) * sign_pow(d, m as u32));
    }
    let params = FracDerivParams::new(base, beta, m)?;
    let prefactor = gamma_ratio(alpha - beta + 1.0, alpha + 1.0);
    Ok(prefactor * power_rule(alpha, &params, x)?)
}

/// Evaluates the fractional-derivative representation of the covariation
/// along `theta = (eps, 1)` on `{|s1| <= |s2|}` and `theta = (1, eps)` on
/// `{|s1| > |s2|}`, reporting the gap to the kernel integral for each
/// epsilon. Atoms with `s1 = 0` (resp. `s2 = 0`) in their region have no
/// base point and contribute their kernel value directly.
pub fn covariation_limit_check(
    model: &StableModel,
    beta: f64,
    m: u8,
    epsilons: &[f64],
) -> Result<LimitReport> {
    require_bivariate(model)?;
    if epsilons.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Validation("epsilons must be positive".into()));
    }
    let alpha = model.alpha();
    let params = CovariationParams::new(alpha, beta, m)?;
    let target = symmetric_covariation(model, beta, m)?;

    let mut values = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let mut acc = 0.0;
        for atom in model.measure().atoms() {
            let (s1, s2) = (atom.direction()[0], atom.direction()[1]);
            let v = if s1.abs() <= s2.abs() {
                if s1 == 0.0 {
                    kernel(&params, s1, s2)
                } else {
                    // d^beta/d theta1^beta of |s1|^alpha |theta1 + theta2 s2/s1|^alpha
                    let base = -s2 / s1;
                    s1.abs().powf(alpha) * normalized_power_rule(alpha, beta, m, base, eps)?
                }
            } else if s2 == 0.0 {
                kernel(&params, s1, s2)
            } else {
                let base = -s1 / s2;
                s2.abs().powf(alpha) * normalized_power_rule(alpha, beta, m, base, eps)?
            };
            acc += atom.weight() * v;
        }
        values.push(acc);
    }
    let gaps: Vec<f64> = values.iter().map(|v| (v - target).abs()).collect();
    let strictly_decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    Ok(LimitReport {
        target,
        epsilons: epsilons.to_vec(),
        values,
        gaps,
        strictly_decreasing,
    })
}
