//! Shared error type for all engine operations.

use std::fmt;
use std::path::PathBuf;

/// Errors produced by validation, numerics, scheduling, and artifact I/O.
#[derive(Debug)]
pub enum Error {
    /// Two sequences or vectors that must agree in length do not.
    DimensionMismatch { expected: usize, actual: usize },
    /// A denominator norm fell below the degeneracy tolerance.
    DegenerateDenominator { value: f64 },
    /// Sample mean too close to zero for a coefficient of variation.
    DegenerateMean { mean: f64 },
    /// A vector with (near-)zero Euclidean norm where a direction is required.
    ZeroNormVector,
    /// An operation received an empty input it cannot work with.
    EmptyInput { what: &'static str },
    /// A scalar input was NaN or infinite.
    NonFinite { name: &'static str, value: f64 },
    /// A scalar input fell outside its documented domain.
    Domain { name: &'static str, value: f64, expected: &'static str },
    /// An error raised while processing element `index` of a sequence.
    AtIndex { index: usize, source: Box<Error> },
    /// A domain-type invariant failed during construction or load.
    Validation { context: String, message: String },
    /// The embedding bank has no entry carrying the requested label.
    MissingLabel { label: &'static str },
    /// Too few entries to compute the requested statistic.
    InsufficientEntries { what: &'static str, needed: usize, got: usize },
    /// A policy was configured without an input it requires.
    Config { message: String },
    /// The inverse transform produced a non-negligible imaginary part.
    ImaginaryResidue { max_abs: f64, tolerance: f64 },
    /// A file did not conform to the artifact schema.
    Schema { path: PathBuf, message: String },
    /// Filesystem failure while reading or writing an artifact.
    Io { path: PathBuf, source: std::io::Error },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DimensionMismatch { expected, actual } => {
                write!(f, "dimension mismatch: expected {expected}, got {actual}")
            }
            Self::DegenerateDenominator { value } => {
                write!(f, "degenerate denominator: norm {value:e} is below tolerance")
            }
            Self::DegenerateMean { mean } => {
                write!(f, "degenerate mean {mean:e}: too close to zero for a coefficient of variation")
            }
            Self::ZeroNormVector => write!(f, "vector has (near-)zero norm"),
            Self::EmptyInput { what } => write!(f, "empty input: {what}"),
            Self::NonFinite { name, value } => {
                write!(f, "non-finite value for {name}: {value}")
            }
            Self::Domain { name, value, expected } => {
                write!(f, "{name} = {value} outside domain ({expected})")
            }
            Self::AtIndex { index, source } => write!(f, "at index {index}: {source}"),
            Self::Validation { context, message } => write!(f, "invalid {context}: {message}"),
            Self::MissingLabel { label } => {
                write!(f, "embedding bank has no \"{label}\" entries")
            }
            Self::InsufficientEntries { what, needed, got } => {
                write!(f, "{what}: need at least {needed} entries, got {got}")
            }
            Self::Config { message } => write!(f, "configuration error: {message}"),
            Self::ImaginaryResidue { max_abs, tolerance } => {
                write!(
                    f,
                    "inverse transform left imaginary residue {max_abs:e} above tolerance {tolerance:e}"
                )
            }
            Self::Schema { path, message } => {
                write!(f, "schema error in {}: {message}", path.display())
            }
            Self::Io { path, source } => write!(f, "io error on {}: {source}", path.display()),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Self::AtIndex { source, .. } => Some(source.as_ref()),
            Self::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
