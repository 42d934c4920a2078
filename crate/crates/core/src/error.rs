use thiserror::Error;

use crate::arith::Factorization;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The input is larger than the supported magnitude.
    #[error("size error: {0}")]
    Size(String),

    /// Factoring stopped before the cofactor could be split.
    #[error("factorization incomplete: unfactored part {cofactor}")]
    Unfactored {
        partial: Factorization,
        cofactor: u128,
    },

    /// A search or enumeration exceeded its configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A value that must be an integer (or divisible) was not.
    #[error("integrality failure at index {index}: {detail}")]
    Integrality { index: usize, detail: String },

    /// The requested output precision is not available from the input.
    #[error("insufficient precision: {0}")]
    Precision(String),

    /// Two operands live in different rings or have different precisions.
    #[error("operand mismatch: {0}")]
    Mismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures caused by effort limits rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Unfactored { .. } | Error::Budget(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
