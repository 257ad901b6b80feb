use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Mathieu basis or recoil ladder is too short for the requested evolution.
    #[error("truncation too small: {0}")]
    Truncation(String),

    /// Band labels could not be assigned unambiguously.
    #[error("ambiguous band labeling at nu={nu}, alpha={alpha}, R={half_width}: {detail}")]
    Labeling {
        nu: f64,
        alpha: f64,
        half_width: usize,
        detail: String,
    },

    /// The tridiagonal eigen-solver did not converge.
    #[error("eigen-solver failed at nu={nu}, alpha={alpha}, R={half_width}")]
    EigenSolver { nu: f64, alpha: f64, half_width: usize },

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    /// The requested band cache is not available.
    #[error("missing band cache: {0}")]
    MissingCache(String),

    /// Two fields that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
