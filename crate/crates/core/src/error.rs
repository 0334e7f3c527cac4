use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("Wood anomaly: kappa^2 coincides with transverse eigenvalue {index} (|kappa^2 - lambda| = {distance:e})")]
    WoodAnomaly { index: usize, distance: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("spectrum too short: {0}")]
    InsufficientSpectrum(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("coupling error: {0}")]
    Coupling(String),

    #[error("singular system ({context}), condition estimate {condition:e}")]
    Singular { context: String, condition: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
