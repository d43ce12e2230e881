//! Error type shared by all series operations.

use alloc::string::String;
use core::fmt;

use crate::rational::Rational;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// The error type for the series, bracket and identity operations.
#[derive(Debug, Clone, PartialEq, Eq)]
#[non_exhaustive]
pub enum Error {
    /// Exact division of rationals by zero.
    DivisionByZero,
    /// An exponential polynomial term `a·e^{bt}` with rate `b ≥ 1` cannot be
    /// integrated against `e^{-t}` over `[0, ∞)`.
    IntegralDivergent { rate: Rational },
    /// A precondition on plain arguments was violated.
    InvalidArgument(String),
    /// Two series over different variables were combined.
    VariableMismatch { left: String, right: String },
    /// The requested value lies outside the known-precision window.
    InsufficientPrecision(String),
    /// Division by a series that is zero everywhere on its window.
    DivisionByZeroSeries,
    /// Composition, reversion, exp or log applied to a series whose valuation
    /// does not satisfy the operation's requirement.
    CompositionValuation(String),
    /// A pole of the rational function lies strictly inside the requested
    /// annulus, so no expansion exists there.
    PoleInAnnulus { root: Rational },
    /// Annulus bounds with `inner >= outer`.
    InvalidAnnulus,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::IntegralDivergent { rate } => {
                write!(f, "integral divergent: exponential rate {rate} >= 1")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::VariableMismatch { left, right } => {
                write!(f, "variable mismatch: '{left}' vs '{right}'")
            }
            Error::InsufficientPrecision(msg) => write!(f, "insufficient precision: {msg}"),
            Error::DivisionByZeroSeries => write!(f, "division by a zero series"),
            Error::CompositionValuation(msg) => write!(f, "composition valuation error: {msg}"),
            Error::PoleInAnnulus { root } => {
                write!(f, "pole at {root} lies strictly inside the annulus")
            }
            Error::InvalidAnnulus => write!(f, "invalid annulus: inner radius >= outer radius"),
        }
    }
}

impl core::error::Error for Error {}
