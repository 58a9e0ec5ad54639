//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or invariant-violating input data.
    #[error("input error: {0}")]
    Input(String),

    /// A named hypothesis of an operation does not hold for the given data.
    #[error("hypothesis {name} violated: {detail}")]
    Precondition { name: String, detail: String },

    /// A mathematically impossible request (e.g. untwisting a vertical curve).
    #[error("domain error: {0}")]
    Domain(String),

    /// A case/parameter combination outside the regime the formulas cover.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// A stored certificate failed re-verification.
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),

    /// "Unreachable" arithmetic branch; indicates inconsistent inputs.
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn precondition(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Precondition {
            name: name.into(),
            detail: detail.into(),
        }
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
