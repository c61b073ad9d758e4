//! Error type shared by every module.
//!
//! Operations whose misuse a caller can trigger (dimension mismatches, caps,
//! unparsable input) return [`Error`]; violations that can only arise from a
//! bug inside this crate are asserted instead.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operands belong to different groups")]
    GroupMismatch,

    #[error("group closure exceeded the cap of {cap} elements")]
    ClosureExceeded { cap: usize },

    #[error("generator is not invertible")]
    NonInvertibleGenerator,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("eigenspace ranks sum to {got}, expected {expected}")]
    EigenRankMismatch { expected: usize, got: usize },

    #[error("homological degree {got} out of range for this operation ({expected})")]
    DegreeOutOfRange { expected: &'static str, got: usize },

    #[error("total degree {degree} exceeds the configured cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },

    #[error("index {index} out of range ({bound} available)")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("requested table is too large: {0}")]
    RangeTooLarge(String),

    #[error("cochain evaluation failed: {0}")]
    EvaluationFailed(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
