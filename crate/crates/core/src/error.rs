use std::path::PathBuf;

use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = GdafError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum GdafError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed document {path} at line {line}, column {column}: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid gait set ({} violation(s)): {}", .0.len(), summarize(.0))]
    Invalid(Vec<Violation>),

    #[error("insufficient strides: found {found} strike(s), need at least 2")]
    InsufficientStrides { found: usize },

    #[error("degenerate stride starting at sample {index}: {reason}")]
    DegenerateStride { index: usize, reason: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("degenerate variance: series is constant")]
    DegenerateVariance,

    #[error("missing channel `{0}`")]
    MissingChannel(String),

    #[error("speed {speed} m/s not found; available: {available}")]
    UnknownSpeed { speed: f64, available: String },

    #[error("joint mapping error: {0}")]
    Mapping(String),

    #[error("incomplete grid: no {quantity} series for channel `{channel}` at {speed} m/s")]
    IncompleteGrid {
        quantity: &'static str,
        channel: String,
        speed: f64,
    },

    #[error("the two gait sets share no walking speed")]
    NoCommonSpeeds,

    #[error("configuration error: {0}")]
    Config(String),
}

impl GdafError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        GdafError::Io {
            path: path.into(),
            source,
        }
    }
}

fn summarize(violations: &[Violation]) -> String {
    let mut parts: Vec<String> = violations.iter().take(3).map(|v| v.to_string()).collect();
    if violations.len() > 3 {
        parts.push(format!("... and {} more", violations.len() - 3));
    }
    parts.join("; ")
}
