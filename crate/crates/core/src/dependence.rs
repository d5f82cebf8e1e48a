//! Executable dependence checks for bivariate and trivariate SαS models:
//! independence (necessary and sufficient conditions), additivity of the
//! covariation over independent summands, the James-orthogonality lower
//! bound, and the scalar min/max inequality behind it.
//!
//! Every check returns a serializable report rather than a bare boolean so
//! that failures carry the offending parameters and margins.

use serde::Serialize;

use crate::covariation::{
    covariation_norm, linear_combination_covariation,
    linear_combination_covariation_via_pushforward, symmetric_covariation,
};
use crate::error::{check_dim, Error, Result};
use crate::series::{scale_parameter_series, DEFAULT_MAX_TERMS};
use crate::spectral_measure::StableModel;

/// Coordinates closer to zero than this count as zero in support checks.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Largest `k` for which the James hypothesis `[lambda X1, X2]_{alpha,k,1} = 0`
/// is checked.
pub const JAMES_K_MAX: u32 = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovariationCheck {
    pub beta: f64,
    pub m: u8,
    pub value: f64,
    pub expected: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NecessaryReport {
    /// Mass of the axis points, `Gamma({(0, +-1)}) + Gamma({(+-1, 0)})`.
    pub axis_mass: f64,
    pub checks: Vec<CovariationCheck>,
    pub passed: bool,
}

impl NecessaryReport {
    pub fn failures(&self) -> impl Iterator<Item = &CovariationCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn require_axis_support(model: &StableModel) -> Result<()> {
    for (index, atom) in model.measure().atoms().iter().enumerate() {
        let s = atom.direction();
        if s[0].abs() > SUPPORT_TOL && s[1].abs() > SUPPORT_TOL {
            return Err(Error::Support {
                index,
                reason: format!("({}, {}) is not on a coordinate axis", s[0], s[1]),
            });
        }
    }
    Ok(())
}

/// For an axis-supported measure, `[X1, X2]_{alpha,beta,m}` equals the
/// total mass at `(beta, m) = (0, 0)` and vanishes for every other pair.
/// Each `beta` in the grid is checked with both `m = 0` and `m = 1`.
pub fn independence_necessary_report(
    model: &StableModel,
    beta_grid: &[f64],
    tol: f64,
) -> Result<NecessaryReport> {
    check_dim(2, model.dim())?;
    require_axis_support(model)?;
    let axis_mass = model.measure().total_mass();
    let mut checks = Vec::with_capacity(2 * beta_grid.len());
    for &beta in beta_grid {
        for m in [0u8, 1] {
            let value = symmetric_covariation(model, beta, m)?;
            let expected = if beta == 0.0 && m == 0 { axis_mass } else { 0.0 };
            checks.push(CovariationCheck {
                beta,
                m,
                value,
                expected,
                passed: (value - expected).abs() <= tol,
            });
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(NecessaryReport {
        axis_mass,
        checks,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SufficientReport {
    pub beta: f64,
    pub covariation: f64,
    /// Whether `|[X1, X2]_{alpha,beta,0}| <= tol`, i.e. the condition applies.
    pub triggered: bool,
    /// Largest `|phi(t1, t2) - phi(t1, 0) phi(0, t2)|` over the grid; only
    /// computed when triggered.
    pub max_gap: Option<f64>,
    /// Vacuously true when the condition is not triggered.
    pub passed: bool,
}

/// If `[X1, X2]_{alpha,beta,0}` vanishes, the characteristic function must
/// factorize; this checks the factorization on a grid of `theta`.
pub fn independence_sufficient_check(
    model: &StableModel,
    beta: f64,
    theta_grid: &[[f64; 2]],
    tol: f64,
) -> Result<SufficientReport> {
    let covariation = symmetric_covariation(model, beta, 0)?;
    let triggered = covariation.abs() <= tol;
    if !triggered {
        return Ok(SufficientReport {
            beta,
            covariation,
            triggered,
            max_gap: None,
            passed: true,
        });
    }
    let mut max_gap = 0.0f64;
    for &[t1, t2] in theta_grid {
        let joint = model.characteristic_function(&[t1, t2])?;
        let product = model.characteristic_function(&[t1, 0.0])?
            * model.characteristic_function(&[0.0, t2])?;
        max_gap = max_gap.max((joint - product).abs());
    }
    Ok(SufficientReport {
        beta,
        covariation,
        triggered,
        max_gap: Some(max_gap),
        passed: max_gap <= tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditivityCheck {
    pub beta: f64,
    pub m: u8,
    /// `[X1, X2 + X3]` from the kernel integral over the full measure.
    pub joint: f64,
    /// `[X1, X2] + [X1, X3]` from the two marginal pushforwards.
    pub split: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditivityReport {
    pub checks: Vec<AdditivityCheck>,
    pub max_gap: f64,
    pub passed: bool,
}

/// `(beta, m)` pairs on which additivity is checked. `(0, 0)` is left
/// out: that kernel does not vanish when its second argument is zero, so
/// the identity does not hold there.
pub fn additivity_grid(alpha: f64) -> Vec<(f64, u8)> {
    let mut grid = vec![(0.0, 1)];
    for beta in [0.5, 1.0, 0.5 * alpha, alpha, 2.5] {
        grid.push((beta, 0));
        grid.push((beta, 1));
    }
    grid
}

/// With `X2` and `X3` independent (every atom has `s2 s3 = 0`),
/// `[X1, X2 + X3] = [X1, X2] + [X1, X3]`.
pub fn additivity_check(model: &StableModel, tol: f64) -> Result<AdditivityReport> {
    check_dim(3, model.dim())?;
    for (index, atom) in model.measure().atoms().iter().enumerate() {
        let s = atom.direction();
        if (s[1] * s[2]).abs() > SUPPORT_TOL {
            return Err(Error::Support {
                index,
                reason: format!("s2 s3 = {} is not zero", s[1] * s[2]),
            });
        }
    }
    let first = [1.0, 0.0, 0.0];
    let mut checks = Vec::new();
    let mut max_gap = 0.0f64;
    for (beta, m) in additivity_grid(model.alpha()) {
        let joint = linear_combination_covariation(model, &first, &[0.0, 1.0, 1.0], beta, m)?;
        let split = linear_combination_covariation_via_pushforward(
            model,
            &first,
            &[0.0, 1.0, 0.0],
            beta,
            m,
        )? + linear_combination_covariation_via_pushforward(
            model,
            &first,
            &[0.0, 0.0, 1.0],
            beta,
            m,
        )?;
        let gap = (joint - split).abs();
        max_gap = max_gap.max(gap);
        checks.push(AdditivityCheck {
            beta,
            m,
            joint,
            split,
            passed: gap <= tol,
        });
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(AdditivityReport {
        checks,
        max_gap,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisViolation {
    pub k: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JamesEntry {
    pub lambda: f64,
    /// First `k` with `|[lambda X1, X2]_{alpha,k,1}| > tol`, if any.
    pub violation: Option<HypothesisViolation>,
    /// `||lambda X1 + X2||_alpha`.
    pub combined_norm: f64,
    /// `min{2^(1-1/alpha), 1} max{||lambda X1||, ||X2||}`.
    pub lower_bound: f64,
    pub margin: f64,
    /// `||lambda X1 + X2|| - ||X2||`, for `alpha >= 1`.
    pub james_margin: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JamesReport {
    pub constant: f64,
    pub entries: Vec<JamesEntry>,
    pub hypothesis_holds: bool,
    /// Whether every entry whose hypothesis holds satisfies the bounds.
    pub passed: bool,
}

/// `min{2^(1 - 1/alpha), 1}`.
pub fn james_constant(alpha: f64) -> f64 {
    2f64.powf(1.0 - 1.0 / alpha).min(1.0)
}

/// Lower bound on `||lambda X1 + X2||_alpha` under vanishing odd
/// covariations, plus James orthogonality of `X2` to `X1` when
/// `alpha >= 1`. The hypothesis is checked for `k = 0..=JAMES_K_MAX`.
pub fn james_bound_check(model: &StableModel, lambda_grid: &[f64], tol: f64) -> Result<JamesReport> {
    check_dim(2, model.dim())?;
    let alpha = model.alpha();
    let constant = james_constant(alpha);
    let norm1 = covariation_norm(model, 0)?;
    let norm2 = covariation_norm(model, 1)?;
    let mut entries = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        let mut violation = None;
        for k in 0..=JAMES_K_MAX {
            let value =
                linear_combination_covariation(model, &[lambda, 0.0], &[0.0, 1.0], k as f64, 1)?;
            if value.abs() > tol {
                violation = Some(HypothesisViolation { k, value });
                break;
            }
        }
        let combined_norm = model
            .measure()
            .integrate(|s| (lambda * s[0] + s[1]).abs().powf(alpha))?
            .powf(1.0 / alpha);
        let lower_bound = constant * (lambda.abs() * norm1).max(norm2);
        let margin = combined_norm - lower_bound;
        let james_margin = (alpha >= 1.0).then_some(combined_norm - norm2);
        let passed = violation.is_some()
            || (margin >= -tol && james_margin.is_none_or(|j| j >= -tol));
        entries.push(JamesEntry {
            lambda,
            violation,
            combined_norm,
            lower_bound,
            margin,
            james_margin,
            passed,
        });
    }
    Ok(JamesReport {
        constant,
        hypothesis_holds: entries.iter().all(|e| e.violation.is_none()),
        passed: entries.iter().all(|e| e.passed),
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvenSeriesReport {
    /// Sum of the even-indexed series terms at `theta = (1, 1)`.
    pub even_sum: f64,
    /// `1/2 integral (|s1 + s2|^alpha + |s1 - s2|^alpha)`.
    pub closed_form: f64,
    pub gap: f64,
    pub passed: bool,
}

/// Compares the even part of the series at `theta = (1, 1)` with
/// `1/2 integral (|s1 + s2|^alpha + |s1 - s2|^alpha)`; when the odd
/// covariations vanish this is `sigma^alpha(1, 1)` itself.
pub fn even_series_identity(model: &StableModel, tol: f64) -> Result<EvenSeriesReport> {
    check_dim(2, model.dim())?;
    let alpha = model.alpha();
    let expansion = scale_parameter_series(model, &[1.0, 1.0], 0.1 * tol, DEFAULT_MAX_TERMS)?;
    let even_sum = expansion.even_sum();
    let closed_form = 0.5
        * model.measure().integrate(|s| {
            (s[0] + s[1]).abs().powf(alpha) + (s[0] - s[1]).abs().powf(alpha)
        })?;
    let gap = (even_sum - closed_form).abs();
    Ok(EvenSeriesReport {
        even_sum,
        closed_form,
        gap,
        passed: gap <= tol,
    })
}

/// `|x + y|^p + |x - y|^p >= min{2^p, 2} max{|x|^p, |y|^p}`, with a
/// relative allowance of a few ulps for rounding at the equality cases.
pub fn min_max_inequality(x: f64, y: f64, p: f64) -> bool {
    let lhs = (x + y).abs().powf(p) + (x - y).abs().powf(p);
    let rhs = 2f64.powf(p).min(2.0) * x.abs().powf(p).max(y.abs().powf(p));
    lhs >= rhs * (1.0 - 8.0 * f64::EPSILON)
}

/// Every dependence check applicable to a model, as run by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub alpha: f64,
    pub dim: usize,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub necessary: Option<NecessaryReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sufficient: Option<SufficientReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub james: Option<JamesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub even_series: Option<EvenSeriesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub additivity: Option<AdditivityReport>,
    /// Checks that did not apply, with the reason.
    pub skipped: Vec<String>,
    pub failed: Vec<String>,
    pub passed: bool,
}

/// Runs the checks that apply to `model`: the bivariate checks when
/// `dim = 2`, additivity when `dim = 3`. Checks whose preconditions do not
/// hold are listed in `skipped` rather than failing.
pub fn run_suite(model: &StableModel, beta: f64, tol: f64) -> Result<SuiteReport> {
    let alpha = model.alpha();
    let mut report = SuiteReport {
        alpha,
        dim: model.dim(),
        tol,
        necessary: None,
        sufficient: None,
        james: None,
        even_series: None,
        additivity: None,
        skipped: Vec::new(),
        failed: Vec::new(),
        passed: true,
    };
    match model.dim() {
        2 => {
            let betas = [0.0, 0.5 * alpha, 1.0, alpha, 2.0];
            match independence_necessary_report(model, &betas, tol) {
                Ok(r) => report.necessary = Some(r),
                Err(e @ Error::Support { .. }) => report.skipped.push(format!("necessary: {e}")),
                Err(e) => return Err(e),
            }
            let grid: Vec<[f64; 2]> = [-2.0, -0.5, 0.7, 1.5]
                .iter()
                .flat_map(|&a| [-1.0, 0.3, 2.0].map(|b| [a, b]))
                .collect();
            report.sufficient = Some(independence_sufficient_check(model, beta, &grid, tol)?);
            report.james = Some(james_bound_check(model, &[-3.0, -1.0, -0.25, 0.5, 1.0, 2.0], tol)?);
            match even_series_identity(model, tol.max(1e-10)) {
                Ok(r) => report.even_series = Some(r),
                Err(e @ Error::Truncation(_)) => report.skipped.push(format!("even_series: {e}")),
                Err(e) => return Err(e),
            }
        }
        3 => match additivity_check(model, tol) {
            Ok(r) => report.additivity = Some(r),
            Err(e @ Error::Support { .. }) => report.skipped.push(format!("additivity: {e}")),
            Err(e) => return Err(e),
        },
        d => report
            .skipped
            .push(format!("no dependence checks for dimension {d}")),
    }
    let outcomes = [
        ("necessary", report.necessary.as_ref().map(|r| r.passed)),
        ("sufficient", report.sufficient.as_ref().map(|r| r.passed)),
        ("james", report.james.as_ref().map(|r| r.passed)),
        ("even_series", report.even_series.as_ref().map(|r| r.passed)),
        ("additivity", report.additivity.as_ref().map(|r| r.passed)),
    ];
    report.failed = outcomes
        .iter()
        .filter(|(_, ok)| *ok == Some(false))
        .map(|(name, _)| name.to_string())
        .collect();
    report.passed = report.failed.is_empty();
    Ok(report)
}
