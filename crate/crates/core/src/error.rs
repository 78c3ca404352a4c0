use thiserror::Error;

/// Errors raised by constructions and checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaveError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("point ({x}, {z}) lies outside the fluid domain")]
    OutOfDomain { x: f64, z: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },
    #[error("finite-difference stencil leaves the fluid domain at ({x}, {z})")]
    Stencil { x: f64, z: f64 },
    #[error("quadrature did not reach tolerance {tol:e} (last change {change:e})")]
    Accuracy { tol: f64, change: f64 },
    #[error("integration path leaves the fluid domain: {0}")]
    IntegrationPath(String),
    #[error("model violation: {0}")]
    ModelViolation(String),
    #[error("missing dependency: {0}")]
    Dependency(String),
    #[error("bracket violation: {0}")]
    Bracket(String),
    #[error("solution blows up near p = {p}: {reason}")]
    BlowUp { p: f64, reason: String },
    #[error("stagnation: sup u = {sup_u} is not below c = {c}")]
    Stagnation { sup_u: f64, c: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("particle left the fluid at t = {t}")]
    Escape { t: f64 },
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, WaveError>;
