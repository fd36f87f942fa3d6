use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("incompatible algebras: {0}")]
    AlgebraMismatch(String),

    #[error("not idempotent: {0}")]
    NotIdempotent(String),

    #[error("not a graded object: {0}")]
    Grading(String),

    #[error("invalid structure: {0}")]
    Invalid(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("operation requires a finite field")]
    RequiresFiniteField,

    #[error("postcondition failed: {0}")]
    Postcondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
