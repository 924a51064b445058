//! Crate-wide error type.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An input that must be finite was NaN or infinite.
    #[error("non-finite input{}: {value}", fmt_index(.index))]
    NonFinite { index: Option<usize>, value: f64 },

    /// A vector had the wrong length for the operation.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A component violated a non-negativity precondition.
    #[error("negative component at index {index}: {value}")]
    NegativeComponent { index: usize, value: f64 },

    /// A scalar argument was outside its admissible range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Requested benchmark preset does not exist.
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    /// A runtime verification suite reported a violation.
    #[error("verification failed: {0}")]
    VerifyFailed(String),

    /// A trace CSV could not be parsed.
    #[error("parse error in {file} line {line}: {message}")]
    TraceParse {
        file: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn fmt_index(index: &Option<usize>) -> String {
    match index {
        Some(i) => format!(" at index {i}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
