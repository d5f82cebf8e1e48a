//! Series representation of the scale parameter of a bivariate SαS vector,
//!
//! ```text
//! sigma^alpha(theta1, theta2) = sum_k (alpha)_k / k! [theta1 X1, theta2 X2]_{alpha, k, k mod 2}
//! ```
//!
//! Each atom contributes `L^alpha sum_k C(alpha, k) r^k sign^k(u v)` where
//! `u = theta1 s1`, `v = theta2 s2`, `L = max(|u|, |v|)` and `r = min/max`,
//! i.e. the binomial expansion of `|u + v|^alpha` around its larger
//! coordinate.
//!
//! # Tail bound
//!
//! Writing `F(k) = sum_{j>k} |C(alpha, j)|`, the remainder after term `k`
//! is bounded atom by atom by
//!
//! ```text
//! w L^alpha min( F(k), |C(alpha, k+1)| r^(k+1) / (1 - r) )
//! ```
//!
//! The first bound uses `r <= 1`; the second uses that `|C(alpha, j)|` is
//! non-increasing for `j >= 1`. The factorial tail has the closed form
//! `F(k) = |C(alpha - 1, k)|` once `k >= ceil(alpha) - 1` (the summands
//! `C(alpha, j) (-1)^j` share one sign there and sum to `(-1)^(k+1)
//! C(alpha - 1, k)`); the single earlier case adds `|C(alpha, 1)|`
//! explicitly. Summed over atoms the bound never exceeds `C F(k)` with
//! `C = [|theta1| X1, |theta2| X2]_{alpha,0,0}`, and it is non-increasing
//! in `k`.

use serde::Serialize;

use crate::covariation::{kernel_raw, linear_combination_covariation, symmetric_covariation};
use crate::error::{check_dim, Error, Result};
use crate::frac_deriv::binomial_coefficient;
use crate::spectral_measure::StableModel;

/// Default cap on the number of series terms.
pub const DEFAULT_MAX_TERMS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesExpansion {
    pub alpha: f64,
    pub theta: [f64; 2],
    /// `terms[k] = (alpha)_k / k! [theta1 X1, theta2 X2]_{alpha,k,k mod 2}`.
    pub terms: Vec<f64>,
    /// Running sums of `terms`, accumulated in index order.
    pub partial_sums: Vec<f64>,
    /// Certified bound on the remainder after each term.
    pub tail_bounds: Vec<f64>,
    /// Index of the last computed term.
    pub truncation_n: usize,
    /// Bound on the remainder after `truncation_n`.
    pub tail_bound: f64,
    /// `[|theta1| X1, |theta2| X2]_{alpha,0,0}`, which dominates every
    /// covariation appearing in the terms.
    pub dominator: f64,
    pub converged: bool,
}

impl SeriesExpansion {
    /// Last partial sum (0 for an empty expansion).
    pub fn sum(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }

    /// Sum of the even-indexed terms.
    pub fn even_sum(&self) -> f64 {
        self.terms.iter().step_by(2).sum()
    }
}

fn theta_pair(theta: &[f64]) -> Result<[f64; 2]> {
    check_dim(2, theta.len())?;
    if theta.iter().any(|t| !t.is_finite()) {
        return Err(Error::Validation("theta must be finite".into()));
    }
    Ok([theta[0], theta[1]])
}

/// `(alpha)_k / k! [theta1 X1, theta2 X2]_{alpha, k, k mod 2}`.
pub fn series_term(model: &StableModel, theta: &[f64], k: u32) -> Result<f64> {
    check_dim(2, model.dim())?;
    let [t1, t2] = theta_pair(theta)?;
    let coefficient = binomial_coefficient(model.alpha(), k);
    if coefficient == 0.0 {
        return Ok(0.0);
    }
    let cov = linear_combination_covariation(
        model,
        &[t1, 0.0],
        &[0.0, t2],
        k as f64,
        (k % 2) as u8,
    )?;
    Ok(coefficient * cov)
}

/// Sum of `|C(alpha, j)|` over `j > k`.
fn factorial_tail(alpha: f64, k: usize) -> f64 {
    let closed = |k: usize| binomial_coefficient(alpha - 1.0, k as u32).abs();
    if (k as f64) >= alpha.ceil() - 1.0 {
        closed(k)
    } else {
        // Only reached for k = 0 with alpha in (1, 2].
        alpha + closed(1)
    }
}

struct ScaledAtom {
    weight: f64,
    u: f64,
    v: f64,
    /// `L^alpha`.
    magnitude: f64,
    ratio: f64,
}

/// Accumulates the series until the certified tail bound drops to `tol`
/// or `max_terms` terms have been summed. Non-convergence is reported as
/// [`Error::Truncation`] carrying everything computed so far.
pub fn scale_parameter_series(
    model: &StableModel,
    theta: &[f64],
    tol: f64,
    max_terms: usize,
) -> Result<SeriesExpansion> {
    check_dim(2, model.dim())?;
    let theta = theta_pair(theta)?;
    if !(tol > 0.0) {
        return Err(Error::Validation(format!("tolerance must be positive, got {tol}")));
    }
    if max_terms == 0 {
        return Err(Error::Validation("max_terms must be at least 1".into()));
    }
    let alpha = model.alpha();
    let atoms: Vec<ScaledAtom> = model
        .measure()
        .atoms()
        .iter()
        .map(|atom| {
            let u = theta[0] * atom.direction()[0];
            let v = theta[1] * atom.direction()[1];
            let (small, large) = if u.abs() <= v.abs() {
                (u.abs(), v.abs())
            } else {
                (v.abs(), u.abs())
            };
            ScaledAtom {
                weight: atom.weight(),
                u,
                v,
                magnitude: large.powf(alpha),
                ratio: if large == 0.0 { 0.0 } else { small / large },
            }
        })
        .collect();
    let dominator: f64 = atoms.iter().map(|a| a.weight * a.magnitude).sum();

    let mut expansion = SeriesExpansion {
        alpha,
        theta,
        terms: Vec::new(),
        partial_sums: Vec::new(),
        tail_bounds: Vec::new(),
        truncation_n: 0,
        tail_bound: f64::INFINITY,
        dominator,
        converged: false,
    };
    let mut coefficient = 1.0;
    let mut sum = 0.0;
    for k in 0..max_terms {
        let beta = k as f64;
        let m = (k % 2) as u32;
        let cov: f64 = atoms
            .iter()
            .map(|a| a.weight * kernel_raw(alpha, beta, m, a.u, a.v))
            .sum();
        let term = if coefficient == 0.0 { 0.0 } else { coefficient * cov };
        debug_assert!(term.abs() <= coefficient.abs() * dominator * (1.0 + 1e-12) + f64::MIN_POSITIVE);
        sum += term;

        let next = coefficient * (alpha - beta) / (beta + 1.0);
        let tail_all = factorial_tail(alpha, k);
        let tail: f64 = atoms
            .iter()
            .map(|a| {
                let geometric = if a.ratio < 1.0 {
                    next.abs() * a.ratio.powi(k as i32 + 1) / (1.0 - a.ratio)
                } else {
                    f64::INFINITY
                };
                a.weight * a.magnitude * tail_all.min(geometric)
            })
            .sum();

        expansion.terms.push(term);
        expansion.partial_sums.push(sum);
        expansion.tail_bounds.push(tail);
        expansion.truncation_n = k;
        expansion.tail_bound = tail;
        if tail <= tol {
            expansion.converged = true;
            return Ok(expansion);
        }
        coefficient = next;
    }
    Err(Error::Truncation(Box::new(expansion)))
}

/// `1/2 theta2^2 Var(X2) + theta1 theta2 Cov(X1, X2) + 1/2 theta1^2 Var(X1)`
/// for a Gaussian (`alpha = 2`) model, with `Var(X_i) = 2 ||X_i||_2^2` and
/// `Cov = 2 [X1, X2]_{2,1,1}`.
pub fn gaussian_quadratic_form(model: &StableModel, theta: &[f64]) -> Result<f64> {
    check_dim(2, model.dim())?;
    let [t1, t2] = theta_pair(theta)?;
    let (var1, var2, cov) = gaussian_moments(model)?;
    Ok(0.5 * t2 * t2 * var2 + t1 * t2 * cov + 0.5 * t1 * t1 * var1)
}

/// `(Var(X1), Var(X2), Cov(X1, X2))` of a Gaussian model.
pub fn gaussian_moments(model: &StableModel) -> Result<(f64, f64, f64)> {
    check_dim(2, model.dim())?;
    if model.alpha() != 2.0 {
        return Err(Error::Domain(format!(
            "Gaussian reduction needs alpha = 2, got {}",
            model.alpha()
        )));
    }
    let var1 = 2.0 * model.measure().integrate(|s| s[0] * s[0])?;
    let var2 = 2.0 * model.measure().integrate(|s| s[1] * s[1])?;
    let cov = 2.0 * symmetric_covariation(model, 1.0, 1)?;
    Ok((var1, var2, cov))
}

/// Characteristic function `exp(-sigma^alpha(theta))` with the exponent
/// taken from the series.
pub fn chf_series(model: &StableModel, theta: &[f64], tol: f64) -> Result<f64> {
    let expansion = scale_parameter_series(model, theta, tol, DEFAULT_MAX_TERMS)?;
    Ok((-expansion.sum()).exp())
}
