//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by constructors and operations.
///
/// Verdicts such as "not displayed" or "inconclusive" are report content and
/// are not errors; this type is reserved for misuse and for computations that
/// cannot proceed at the available precision.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands of incompatible shape were combined.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A coefficient-ring or context invariant failed at construction.
    #[error("validation failed: {0}")]
    Validation(String),
    /// The certified precision would drop below what the operation needs.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    /// The orientation generator (or a tested element) is not distinguished.
    #[error("not distinguished: {0}")]
    NotDistinguished(String),
    /// The constant term of the orientation generator is not a uniformizer.
    #[error("bad constant term: {0}")]
    BadConstantTerm(String),
    /// A matrix that must be invertible is not.
    #[error("not invertible: {0}")]
    NotInvertible(String),
    /// A module lacks the structure an operation requires.
    #[error("wrong module type: {0}")]
    WrongType(String),
    /// An element does not belong to the required group or ideal.
    #[error("membership failed: {0}")]
    Membership(String),
    /// A finite computation would exceed the configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// A Frobenius image needs a delta-iterate beyond the envelope depth.
    #[error("envelope depth exhausted: {0}")]
    DepthExhausted(String),
    /// The cocharacter is not 1-bounded for the group.
    #[error("cocharacter is not 1-bounded: {0}")]
    NotOneBounded(String),
    /// A successive-approximation solver did not reach zero.
    #[error("solver did not converge: {0}")]
    NonConvergence(String),
    /// A request lacks inputs the operation needs.
    #[error("usage: {0}")]
    Usage(String),
    /// Malformed textual input.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
