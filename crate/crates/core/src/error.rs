use thiserror::Error;

/// Errors raised by the geometry kernel, the curve generators and the verifiers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    /// A point or tangent vector is off its model surface.
    #[error("model constraint violated: {0}")]
    ConstraintViolation(String),

    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The geometric hypothesis of a bound does not hold, so the bound is not judged.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// A curvature window straddles a corner of a non-regular curve.
    #[error("curvature window at sample {index} spans a corner")]
    Corner { index: usize },

    /// A support function whose radius of curvature leaves (0, 1/k0].
    #[error("support function rejected at theta = {theta}: {reason}")]
    Rejected { theta: f64, reason: String },

    /// A warped metric leaves its declared curvature band or degenerates.
    #[error("warped metric rejected at t = {t}: {reason}")]
    Band { t: f64, reason: String },

    /// The frame-ODE closure solver did not converge.
    #[error("curve did not close after {iterations} iterations (residual {residual:e})")]
    NonClosure { iterations: usize, residual: f64 },

    /// Malformed serialized input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;

pub(crate) fn domain(msg: impl Into<String>) -> GeomError {
    GeomError::Domain(msg.into())
}

pub(crate) fn hypothesis(msg: impl Into<String>) -> GeomError {
    GeomError::Hypothesis(msg.into())
}
