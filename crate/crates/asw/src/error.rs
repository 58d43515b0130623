//! Error type shared across the crate.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Division by zero in a field or a non-unit inverse request.
    DivisionByZero,
    /// A requested inverse does not exist (non-unit constant term, etc.).
    NotAUnit(String),
    /// Construction-time validation failed (bad prime, reducible modulus...).
    InvalidParams(String),
    /// A tower spec violates the minimal-break-ratio conditions.
    SpecViolation(String),
    /// Operands live over different fields / rings / levels.
    Mismatch(String),
    /// An internal mathematical assertion failed; indicates a bug or a
    /// spec outside the supported class.
    Internal(String),
    /// Truncation too shallow for the requested output.
    Truncation(String),
    /// I/O or parse failure for tower-spec files.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NotAUnit(s) => write!(f, "not a unit: {s}"),
            Error::InvalidParams(s) => write!(f, "invalid parameters: {s}"),
            Error::SpecViolation(s) => write!(f, "tower spec violation: {s}"),
            Error::Mismatch(s) => write!(f, "operand mismatch: {s}"),
            Error::Internal(s) => write!(f, "internal assertion failed: {s}"),
            Error::Truncation(s) => write!(f, "insufficient truncation: {s}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
        }
    }
}

impl std::error::Error for Error {}

impl Error {
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn spec(msg: impl Into<String>) -> Self {
        Error::SpecViolation(msg.into())
    }
}
