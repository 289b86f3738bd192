use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("profile construction failed: {0}")]
    Profile(String),

    #[error("far-field fit residual {residual:.3e} exceeds tolerance {tol:.3e} (r_max too small?)")]
    FarFieldFit { residual: f64, tol: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Newton iteration diverged: {0}")]
    NewtonDiverged(String),

    #[error("collocation system ill-conditioned (condition estimate {0:.3e})")]
    IllConditioned(f64),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("grid does not resolve required scale: {0}")]
    GridResolution(String),

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
