//! Command-line front end.
//!
//! Every subcommand reads a measure spec (`--input`, JSON), dispatches to
//! the library and writes CSV or JSON. Exit status is 0 on success, 1 on
//! invalid input (with a JSON error object on stderr) and 2 when a
//! property check fails.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::covariation::symmetric_covariation;
use crate::dependence::run_suite;
use crate::error::{Error, Result};
use crate::frac_deriv::{frac_derivative_numeric, power_rule, FracDerivParams};
use crate::quadrature::QuadConfig;
use crate::sampler::{empirical_chf, sample_vector};
use crate::series::{scale_parameter_series, SeriesExpansion, DEFAULT_MAX_TERMS};
use crate::spectral_measure::{MeasureSpec, StableModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PROPERTY: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Validate a measure spec and re-emit it in canonical form.
    Validate,
    /// Symmetric covariation [X1, X2]_{alpha,beta,m}.
    Covar,
    /// Per-term series for sigma^alpha(theta).
    Series,
    /// Characteristic function at theta.
    Chf,
    /// Monte Carlo draws and their empirical characteristic function.
    Sample,
    /// Fractional derivative of |x - a|^p: power rule against quadrature.
    Fracderiv,
    /// Dependence checks (independence, additivity, James bound).
    Check,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "symcov", version, about = "Symmetric covariations of SαS vectors")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Measure spec (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Replace the spec's alpha.
    #[arg(long, global = true)]
    pub alpha_override: Option<f64>,

    #[arg(long, global = true, default_value_t = 1.0)]
    pub beta: f64,

    #[arg(long, global = true, default_value_t = 0)]
    pub m: u8,

    #[arg(long, global = true, num_args = 1.., allow_negative_numbers = true)]
    pub theta: Option<Vec<f64>>,

    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    /// Number of draws (sample) or maximum number of series terms (series).
    #[arg(long, global = true)]
    pub n: Option<usize>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Write the main artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Exponent p of |x - a|^p (fracderiv).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub p: Option<f64>,

    /// Base point a (fracderiv).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,

    /// Evaluation point x (fracderiv).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub x: Option<f64>,
}

/// What a successful run produced, besides its output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Names of the failed checks.
    PropertyFailure(Vec<String>),
}

const DEFAULT_SAMPLES: usize = 100_000;

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn required<T: Copy>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::Validation(format!("--{flag} is required")))
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Validation(format!("--tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    fn load_model(&self) -> Result<StableModel> {
        let path = self
            .input
            .as_ref()
            .ok_or_else(|| Error::Validation("--input is required".into()))?;
        let model = MeasureSpec::load(path)?.to_model()?;
        match self.alpha_override {
            Some(alpha) => model.with_alpha(alpha),
            None => Ok(model),
        }
    }

    fn theta(&self, dim: usize) -> Result<Vec<f64>> {
        let theta = self
            .theta
            .clone()
            .ok_or_else(|| Error::Validation("--theta is required".into()))?;
        if theta.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: theta.len(),
            });
        }
        Ok(theta)
    }
}

/// Writes to `--out` when given, otherwise to `stdout`.
fn with_artifact<F>(config: &RunConfig, stdout: &mut dyn Write, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match &config.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => write(stdout),
    }
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_series_csv(out: &mut dyn Write, e: &SeriesExpansion) -> Result<()> {
    writeln!(out, "k,falling_factorial,covariation,term,partial_sum,tail_bound")?;
    let mut falling = 1.0;
    let mut coefficient = 1.0;
    for (k, term) in e.terms.iter().enumerate() {
        let covariation = if coefficient == 0.0 { 0.0 } else { term / coefficient };
        writeln!(
            out,
            "{k},{},{},{},{},{}",
            fmt(falling),
            fmt(covariation),
            fmt(*term),
            fmt(e.partial_sums[k]),
            fmt(e.tail_bounds[k])
        )?;
        let kf = k as f64;
        falling *= e.alpha - kf;
        coefficient *= (e.alpha - kf) / (kf + 1.0);
    }
    Ok(())
}

fn run_validate(config: &RunConfig, stdout: &mut dyn Write) -> Result<Outcome> {
    let model = config.load_model()?;
    let spec = MeasureSpec::from_model(&model);
    with_artifact(config, stdout, |out| write_json(out, &serde_json::to_value(&spec)?))?;
    Ok(Outcome::Success)
}

fn run_covar(config: &RunConfig, stdout: &mut dyn Write) -> Result<Outcome> {
    let model = config.load_model()?;
    let value = symmetric_covariation(&model, config.beta, config.m)?;
    with_artifact(config, stdout, |out| match config.format {
        OutputFormat::Csv => Ok(writeln!(out, "{}", fmt(value))?),
        OutputFormat::Json => write_json(
            out,
            &json!({ "alpha": model.alpha(), "beta": config.beta, "m": config.m, "covariation": value }),
        ),
    })?;
    Ok(Outcome::Success)
}

fn run_series(config: &RunConfig, stdout: &mut dyn Write) -> Result<Outcome> {
    let model = config.load_model()?;
    let theta = config.theta(2)?;
    let expansion = scale_parameter_series(
        &model,
        &theta,
        config.tol,
        config.n.unwrap_or(DEFAULT_MAX_TERMS),
    )?;
    let direct = model.scale_parameter_pow(&theta)?;
    let summary = json!({
        "alpha": model.alpha(),
        "theta": theta,
        "sum": expansion.sum(),
        "direct": direct,
        "truncation_n": expansion.truncation_n,
        "tail_bound": expansion.tail_bound,
        "converged": expansion.converged,
    });
    match (config.format, &config.out) {
        (OutputFormat::Json, _) => with_artifact(config, stdout, |out| {
            let mut value = serde_json::to_value(&expansion)?;
            value["direct"] = json!(direct);
            value["sum"] = json!(expansion.sum());
            write_json(out, &value)
        })?,
        (OutputFormat::Csv, Some(_)) => {
            with_artifact(config, stdout, |out| write_series_csv(out, &expansion))?;
            write_json(stdout, &summary)?;
        }
        (OutputFormat::Csv, None) => write_series_csv(stdout, &expansion)?,
    }
    Ok(Outcome::Success)
}

fn run_chf(config: &RunConfig, stdout: &mut dyn Write) -> Result<Outcome> {
    let model = config.load_model()?;
    let theta = config.theta(model.dim())?;
    let direct = model.characteristic_function(&theta)?;
    let series = if model.dim() == 2 {
        Some(crate::series::chf_series(&model, &theta, config.tol)?)
    } else {
        None
    };
    with_artifact(config, stdout, |out| match config.format {
        OutputFormat::Csv => {
            writeln!(out, "chf_direct,chf_series")?;
            let s = series.map(fmt).unwrap_or_default();
            Ok(writeln!(out, "{},{s}", fmt(direct))?)
        }
        OutputFormat::Json => write_json(
            out,
            &json!({ "theta": theta, "chf_direct": direct, "chf_series": series }),
        ),
    })?;
    Ok(Outcome::Success)
}

fn run_sample(config: &RunConfig, stdout: &mut dyn Write) -> Result<Outcome> {
    let model = config.load_model()?;
    let n = config.n.unwrap_or(DEFAULT_SAMPLES);
    let theta = match &config.theta {
        Some(_) => config.theta(model.dim())?,
        None => vec![1.0; model.dim()],
    };
    let batch = sample_vector(&model, n, config.seed)?;
    let summary = if batch.is_empty() {
        json!({ "n": 0, "seed": config.seed, "alpha": model.alpha() })
    } else {
        let (re, im) = empirical_chf(&batch, &theta)?;
        json!({
            "n": n,
            "seed": config.seed,
            "alpha": model.alpha(),
            "theta": theta,
            "empirical_re": re,
            "empirical_im": im,
            "model_chf": model.characteristic_function(&theta)?,
        })
    };
    let write_draws = |out: &mut dyn Write| -> Result<()> {
        let header: Vec<String> = (1..=batch.dim()).map(|i| format!("x{i}")).collect();
        writeln!(out, "{}", header.join(","))?;
        for row in batch.rows() {
            let cells: Vec<String> = row.iter().map(|&v| fmt(v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    };
    match (&config.out, config.format) {
        (Some(_), _) => {
            with_artifact(config, stdout, write_draws)?;
            write_json(stdout, &summary)?;
        }
        (None, OutputFormat::Csv) => write_draws(stdout)?,
        (None, OutputFormat::Json) => write_json(stdout, &summary)?,
    }
    Ok(Outcome::Success)
}

fn run_fracderiv(config: &RunConfig, stdout: &mut dyn Write) -> Result<Outcome> {
    let p = required(config.p, "p")?;
    let a = required(config.a, "a")?;
    let x = required(config.x, "x")?;
    let params = FracDerivParams::new(a, config.beta, config.m)?;
    let closed = power_rule(p, &params, x)?;
    let quad = QuadConfig::default();
    let numeric = frac_derivative_numeric(|t| (t - a).abs().powf(p), &params, x, &quad)?;
    with_artifact(config, stdout, |out| match config.format {
        OutputFormat::Csv => {
            writeln!(out, "power_rule,numeric")?;
            Ok(writeln!(out, "{},{}", fmt(closed), fmt(numeric))?)
        }
        OutputFormat::Json => write_json(
            out,
            &json!({
                "p": p, "a": a, "x": x, "beta": config.beta, "m": config.m,
                "power_rule": closed, "numeric": numeric,
            }),
        ),
    })?;
    Ok(Outcome::Success)
}

fn run_check(config: &RunConfig, stdout: &mut dyn Write) -> Result<Outcome> {
    let model = config.load_model()?;
    let report = run_suite(&model, config.beta, config.tol)?;
    with_artifact(config, stdout, |out| write_json(out, &serde_json::to_value(&report)?))?;
    Ok(if report.passed {
        Outcome::Success
    } else {
        Outcome::PropertyFailure(report.failed)
    })
}

/// Runs one subcommand, writing its primary output to `stdout` (or the
/// `--out` file).
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<Outcome> {
    config.validate()?;
    match config.command {
        Command::Validate => run_validate(config, stdout),
        Command::Covar => run_covar(config, stdout),
        Command::Series => run_series(config, stdout),
        Command::Chf => run_chf(config, stdout),
        Command::Sample => run_sample(config, stdout),
        Command::Fracderiv => run_fracderiv(config, stdout),
        Command::Check => run_check(config, stdout),
    }
}

fn error_object(code: &str, message: &str) -> String {
    json!({ "error": code, "message": message }).to_string()
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(config) => config,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let _ = writeln!(stderr, "{}", error_object("usage", &e.to_string()));
            return EXIT_INVALID;
        }
    };
    match run(&config, stdout) {
        Ok(Outcome::Success) => EXIT_OK,
        Ok(Outcome::PropertyFailure(failed)) => {
            let message = format!("failed checks: {}", failed.join(", "));
            let _ = writeln!(stderr, "{}", error_object("property_failure", &message));
            EXIT_PROPERTY
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", error_object(e.code(), &e.to_string()));
            EXIT_INVALID
        }
    }
}
