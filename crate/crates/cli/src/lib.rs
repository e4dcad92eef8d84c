//! Batch processing, case ingestion, and report emission around the
//! embedding decision engine.

pub mod cases;
pub mod config;
pub mod report;
pub mod run;

use std::fmt;

/// CLI-level error with a stable exit code and a structured JSON rendering.
#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    NotExpansive,
    EigenSolverFailure,
    Analysis,
    Io,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Parse => 64,
            ErrorKind::NotExpansive => 65,
            ErrorKind::EigenSolverFailure => 66,
            ErrorKind::Analysis => 67,
            ErrorKind::Io => 74,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Parse => "parse_error",
            ErrorKind::NotExpansive => "not_expansive",
            ErrorKind::EigenSolverFailure => "eigen_solver_failure",
            ErrorKind::Analysis => "analysis_error",
            ErrorKind::Io => "io_error",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.as_str(), self.message)
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Parse, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Io, message: message.into() }
    }

    pub fn json(&self) -> serde_json::Value {
        serde_json::json!({
            "error": { "kind": self.kind.as_str(), "message": self.message }
        })
    }
}

impl From<besov_embed::Error> for CliError {
    fn from(e: besov_embed::Error) -> Self {
        use besov_embed::Error as E;
        let kind = match &e {
            E::Parse(_) => ErrorKind::Parse,
            E::NotExpansive => ErrorKind::NotExpansive,
            E::EigenSolverFailure => ErrorKind::EigenSolverFailure,
            E::NotSquare { .. }
            | E::NonFiniteEntry
            | E::SingularMatrix
            | E::NotAnEigenvalue { .. }
            | E::Overflow
            | E::IllConditioned { .. }
            | E::InvalidParameter(_) => ErrorKind::Analysis,
        };
        CliError { kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}
