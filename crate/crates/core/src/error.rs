//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by construction, validation, and optimization routines.
#[derive(Debug, Error)]
pub enum QhswError {
    #[error("dimension {got} is not supported: {reason}")]
    InvalidDimension { got: usize, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {got} exceeds the configured cap {cap}")]
    DimensionCapExceeded { got: usize, cap: usize },

    #[error("index ({a},{b}) out of range for dimension {d}")]
    IndexOutOfRange { a: usize, b: usize, d: usize },

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("matrix is not unitary: max residual {residual:.3e}")]
    NotUnitary { residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, QhswError>;
