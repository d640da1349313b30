use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("summand is not of Hodge-Tate type: {0}")]
    NonTateSummand(String),

    #[error("cohomological degree out of range: {0}")]
    DegreeOutOfRange(String),

    #[error("purity violated: {0}")]
    PurityViolated(String),

    #[error("cross-check mismatch: {0}")]
    OracleMismatch(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("invalid valuation model: {0}")]
    InvalidModel(String),
}
