//! Symmetric covariations of jointly symmetric α-stable (SαS) vectors.
//!
//! A SαS vector is described by an exponent `alpha` in `(0, 2]` and a
//! symmetric finite measure on the unit sphere ([`StableModel`]). The
//! crate evaluates:
//!
//! * symmetric covariations `[X1, X2]_{alpha,beta,m}` and related
//!   quantities ([`covariation`]);
//! * the generalized Riemann–Liouville derivative that underlies them
//!   ([`frac_deriv`]);
//! * the series expansion of the scale parameter in covariations
//!   ([`series`]);
//! * dependence checks built on the covariations ([`dependence`]);
//! * a Monte Carlo sampler for validation ([`sampler`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod covariation;
pub mod dependence;
pub mod error;
pub mod frac_deriv;
pub mod quadrature;
pub mod sampler;
pub mod series;
pub mod special;
pub mod spectral_measure;

pub use covariation::{
    conventional_covariation, correlation_coefficient, covariation_limit_check, covariation_norm,
    kernel, linear_combination_covariation, linear_combination_covariation_via_pushforward,
    symmetric_covariation, CovariationParams, LimitReport,
};
pub use error::{Error, Result};
pub use frac_deriv::{frac_derivative_numeric, power_rule, FracDerivParams};
pub use quadrature::QuadConfig;
pub use sampler::{empirical_chf, sample_standard_sas, sample_vector, SampleBatch};
pub use series::{
    chf_series, gaussian_quadratic_form, scale_parameter_series, series_term, SeriesExpansion,
};
pub use spectral_measure::{
    pushforward_linear, MeasureSpec, Pushforward, SpectralAtom, SpectralMeasure, StableModel,
};
