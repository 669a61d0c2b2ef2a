//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure class, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Domain,
    Dimension,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown semiring `{0}`")]
    UnknownSemiring(String),

    #[error("invalid parameters for {semiring}: {reason}")]
    InvalidParams { semiring: String, reason: String },

    #[error("value {value} is not a carrier of {semiring}")]
    CarrierMismatch { semiring: String, value: String },

    #[error("closure of {value} is undefined in {semiring}")]
    UndefinedClosure { semiring: String, value: String },

    #[error("closure undefined at pivot {index}: {value} in {semiring}")]
    PivotClosure {
        /// 1-based pivot position.
        index: usize,
        semiring: String,
        value: String,
    },

    #[error("{0} requires an idempotent semiring")]
    NotIdempotent(String),

    #[error("task requires {expected}, got {actual}")]
    WrongSemiring { expected: String, actual: String },

    #[error("semiring mismatch: {0} vs {1}")]
    SemiringMismatch(String, String),

    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("matrix is not strictly {side} triangular: entry ({row}, {col}) is nonzero")]
    NotTriangular {
        side: &'static str,
        row: usize,
        col: usize,
    },

    #[error("iteration did not stabilize within {0} steps")]
    NoStabilization(usize),

    #[error("invalid interval: lower bound {lower} is not below upper bound {upper}")]
    InvalidInterval { lower: String, upper: String },

    #[error("{0}")]
    Domain(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. } | Error::UnknownSemiring(_) | Error::InvalidParams { .. } => {
                ErrorClass::Parse
            }
            Error::Dimension { .. } | Error::SemiringMismatch(..) => ErrorClass::Dimension,
            _ => ErrorClass::Domain,
        }
    }

    pub(crate) fn dim(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Dimension {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
