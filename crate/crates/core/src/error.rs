//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Why a record sequence was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationKind {
    NonFinite,
    NonPositive,
    Duplicate,
    NotIncreasing,
    Mismatch,
}

impl ValidationKind {
    pub fn code(self) -> &'static str {
        match self {
            ValidationKind::NonFinite => "non_finite_value",
            ValidationKind::NonPositive => "nonpositive_value",
            ValidationKind::Duplicate => "duplicate_value",
            ValidationKind::NotIncreasing => "non_increasing_order",
            ValidationKind::Mismatch => "fit_mismatch",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient data: need at least {needed} records, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// `index` is zero-based into the offending sequence.
    #[error("invalid records ({}) at index {index}: {detail}", kind.code())]
    Validation {
        kind: ValidationKind,
        index: usize,
        detail: String,
    },

    #[error("numeric failure in {routine}: {detail}")]
    Numeric {
        routine: &'static str,
        detail: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
