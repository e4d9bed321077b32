//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by state construction, fidelity evaluation, the
/// brute-force oracles, channel estimation and measurement ingestion.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the requested operation
    /// (non-positive variance, unphysical state, negative mean photon
    /// number, misaligned axes, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A computed value violated an internal consistency bound by more
    /// than can be attributed to floating-point rounding.
    #[error("internal consistency error: {0}")]
    Internal(String),

    /// The requested Fock-space truncation cannot represent the state
    /// to the required accuracy.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// A matrix handed to the Uhlmann oracle is not a valid density
    /// matrix (eigenvalue below the noise floor, bad trace, ...).
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    /// Gain estimation is impossible because the input mean of the
    /// named quadrature is consistent with zero.
    #[error("indeterminate gain: input mean of the {quadrature} quadrature is zero")]
    IndeterminateGain { quadrature: &'static str },

    /// Measured input/output statistics are mutually inconsistent
    /// (e.g. they imply a negative noise variance).
    #[error("inconsistent statistics: {0}")]
    InconsistentStats(String),

    /// A measurement record file failed to parse. `line` is 1-based;
    /// line 0 refers to the file as a whole.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The sample file contained a header but no records.
    #[error("empty samples: file contains no measurement records")]
    EmptySamples,

    /// Too few records to compute the requested statistic.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// The measurement angles do not pin down the state parameters.
    #[error("unidentifiable: {0}")]
    Unidentifiable(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
