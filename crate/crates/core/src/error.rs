use thiserror::Error;

use crate::exactq::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("characteristic polynomial does not split over Q with a full eigenbasis")]
    NotRationalSplit,
    #[error("not rational semisimple: {0}")]
    NotRationalSemisimple(String),
    #[error("matrices do not commute: {0}")]
    NotCommuting(String),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("Jordan type {found:?} does not match requested {requested:?}")]
    WrongPartition { found: Vec<usize>, requested: Vec<usize> },
    #[error("sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("{mu:?} is not dominated by {lambda:?}")]
    NotDominated { mu: Vec<usize>, lambda: Vec<usize> },
    #[error("partition {lambda:?} is not valid for type {group}")]
    InvalidPartitionForType { group: String, lambda: Vec<usize> },
    #[error("unsupported query: {0}")]
    UnsupportedQuery(String),
    #[error("zero input")]
    ZeroInput,
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("linear system has no solution: {0}")]
    NoSolution(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("verification failed [{clause}]: {detail}")]
    CheckFailed { clause: String, detail: String },
    #[error("shape violation [{clause}]: {detail}")]
    ShapeViolation { clause: String, detail: String },
    #[error("internal check failure: {0}")]
    InternalCheckFailure(String),
    #[error("a/b has class {class} modulo {d}-th powers")]
    ConditionNotMet { d: u64, class: Rational },
}

impl Error {
    pub(crate) fn check(clause: &str, detail: impl Into<String>) -> Self {
        Error::CheckFailed { clause: clause.to_string(), detail: detail.into() }
    }

    /// Short machine-readable tag for structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotSquare { .. } => "NotSquare",
            Error::NotRationalSplit => "NotRationalSplit",
            Error::NotRationalSemisimple(_) => "NotRationalSemisimple",
            Error::NotCommuting(_) => "NotCommuting",
            Error::NotNilpotent => "NotNilpotent",
            Error::WrongPartition { .. } => "WrongPartition",
            Error::SizeMismatch(..) => "SizeMismatch",
            Error::NotDominated { .. } => "NotDominated",
            Error::InvalidPartitionForType { .. } => "InvalidPartitionForType",
            Error::UnsupportedQuery(_) => "UnsupportedQuery",
            Error::ZeroInput => "ZeroInput",
            Error::PreconditionViolation(_) => "PreconditionViolation",
            Error::NoSolution(_) => "NoSolution",
            Error::InvalidInput(_) => "InvalidInput",
            Error::CheckFailed { .. } => "CheckFailed",
            Error::ShapeViolation { .. } => "ShapeViolation",
            Error::InternalCheckFailure(_) => "InternalCheckFailure",
            Error::ConditionNotMet { .. } => "ConditionNotMet",
        }
    }
}
