use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, SamError>;

#[derive(Debug, Error)]
pub enum SamError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown {kind} `{id}`")]
    UnknownId { kind: &'static str, id: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("iterate diverged at step {step}: |x| = {norm:e}")]
    Diverged { step: usize, norm: f64 },

    #[error("variant {got} not accepted here (expected {expected})")]
    WrongVariant { expected: &'static str, got: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl SamError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        SamError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SamError::Io {
            path: path.into(),
            source,
        }
    }
}
