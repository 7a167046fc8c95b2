//! Error type shared across the crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by constructors, detectors and training routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Requested modulation is not supported.
    UnsupportedModulation(String),
    /// A vector or matrix dimension does not match the expected one.
    DimensionMismatch { expected: usize, got: usize },
    /// A symbol entry is not a constellation point.
    SymbolNotInAlphabet(f64),
    /// An index component lies outside its admissible range.
    IndexOutOfRange { index: usize, limit: usize },
    /// A matrix is singular or too ill-conditioned to invert reliably.
    IllConditioned(f64),
    /// Exhaustive enumeration would exceed the configured guard.
    EnumerationTooLarge { size: usize, limit: usize },
    /// A value claimed to be a quantizer output matches no output level.
    InvalidQuantizerOutput(f64),
    /// Iterative computation produced non-finite values.
    Diverged(String),
    /// A probability underflowed below the representable floor.
    ProbabilityUnderflow,
    /// A parameter violates its documented precondition.
    InvalidParameter(String),
    /// Snapshot file has an unexpected format version.
    SnapshotVersion { expected: u32, got: u32 },
    /// Snapshot or config contents could not be parsed.
    Format(String),
    /// Underlying I/O failure.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedModulation(kind) => write!(f, "unsupported modulation: {kind}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::SymbolNotInAlphabet(v) => write!(f, "symbol {v} is not in the alphabet"),
            Error::IndexOutOfRange { index, limit } => {
                write!(f, "index {index} out of range (limit {limit})")
            }
            Error::IllConditioned(c) => {
                write!(f, "matrix too ill-conditioned (condition number {c:.3e})")
            }
            Error::EnumerationTooLarge { size, limit } => {
                write!(f, "enumeration of {size} candidates exceeds guard {limit}")
            }
            Error::InvalidQuantizerOutput(v) => {
                write!(f, "{v} is not a valid quantizer output level")
            }
            Error::Diverged(what) => write!(f, "numerical divergence: {what}"),
            Error::ProbabilityUnderflow => write!(f, "probability underflowed below 1e-300"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::SnapshotVersion { expected, got } => {
                write!(
                    f,
                    "snapshot format version mismatch: expected {expected}, got {got}"
                )
            }
            Error::Format(what) => write!(f, "format error: {what}"),
            Error::Io(what) => write!(f, "i/o error: {what}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
