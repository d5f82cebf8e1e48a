use thiserror::Error;

use crate::series::SeriesExpansion;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("numerical error: {message}")]
    Numerical {
        message: String,
        /// Error estimate or offending value, when one is available.
        estimate: Option<f64>,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("degenerate linear map: both coefficient vectors are zero")]
    DegenerateMap,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("series did not reach tolerance after {} terms (tail bound {:e})", .0.truncation_n + 1, .0.tail_bound)]
    Truncation(Box<SeriesExpansion>),

    #[error("atom {index} violates the support condition: {reason}")]
    Support { index: usize, reason: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed json: {0}")]
    Json(serde_json::Error),
}

impl From<serde_json::Error> for Error {
    /// Write failures while serializing are I/O errors, not bad JSON.
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            Error::Io(e.into())
        } else {
            Error::Json(e)
        }
    }
}

impl Error {
    pub(crate) fn numerical(message: impl Into<String>, estimate: Option<f64>) -> Self {
        Error::Numerical {
            message: message.into(),
            estimate,
        }
    }

    /// Stable machine-readable code, used by the CLI error object.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Validation(_) => "validation",
            Error::Numerical { .. } => "numerical",
            Error::Domain(_) => "domain",
            Error::Dimension { .. } => "dimension",
            Error::DegenerateMap => "degenerate_map",
            Error::Degenerate(_) => "degenerate",
            Error::Truncation(_) => "truncation",
            Error::Support { .. } => "support",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Dimension { expected, got });
    }
    Ok(())
}
