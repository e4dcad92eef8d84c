//! Error type shared by all analysis and decision routines.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entries must be finite")]
    NonFiniteEntry,

    #[error("matrix is singular within tolerance")]
    SingularMatrix,

    #[error("eigenvalue iteration did not converge")]
    EigenSolverFailure,

    #[error("{value} is not an eigenvalue of the matrix within tolerance")]
    NotAnEigenvalue { value: String },

    #[error("matrix is not expansive (an eigenvalue has modulus <= 1)")]
    NotExpansive,

    #[error("result magnitude exceeds the representable range; use the log-domain variant")]
    Overflow,

    #[error("condition estimate {cond:.3e} exceeds the cap {cap:.3e} for negative powers")]
    IllConditioned { cond: f64, cap: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
