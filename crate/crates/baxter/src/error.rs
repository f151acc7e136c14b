//! Error type shared by every module in the crate.
//!
//! All fallible public APIs return [`Result`]. Arithmetic operators on
//! expressions panic only on programmer errors (division by an identically
//! zero expression, negative power of zero); everything data-driven reports
//! through this enum instead.

use thiserror::Error;

/// Crate-wide error enum.
#[derive(Debug, Error)]
pub enum Error {
    /// The expression grammar was violated at `pos` (byte offset).
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Evaluation needed a symbol the assignment does not cover.
    #[error("missing value for symbol `{0}`")]
    MissingSymbol(String),

    /// A denominator evaluated to zero at the supplied point.
    #[error("denominator vanishes at the supplied point")]
    DenominatorVanishes,

    /// Division by an expression that is identically zero.
    #[error("division by an identically zero expression")]
    DivisionByZero,

    /// Substitution produced an identically zero denominator.
    #[error("substitution produces an identically zero denominator")]
    SubstitutionCollapse,

    /// The sampler could not find a denominator-safe point.
    #[error("no denominator-safe sample point found after {0} attempts")]
    SamplingExhausted(usize),

    /// Two operators (or an operator and a site layout) disagree in shape.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Structurally invalid input data.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A series window was requested beyond the generated truncation order.
    #[error("truncation overflow: {0}")]
    Truncation(String),

    /// JSON (de)serialization failure, wrapped for uniform reporting.
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
