use std::io;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum GpaError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, GpaError>;

impl GpaError {
    pub fn domain(msg: impl Into<String>) -> Self {
        GpaError::Domain(msg.into())
    }

    pub fn shape(msg: impl Into<String>) -> Self {
        GpaError::Shape(msg.into())
    }
}
