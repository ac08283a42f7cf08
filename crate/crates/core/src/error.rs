//! Error type shared by all modules.

use thiserror::Error;

/// Library-wide error enum.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Geometry collapsed below the coincidence tolerance (sensor on a
    /// target, zero-length ray pair, and so on).
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// Parameters describe a configuration that cannot exist (for example a
    /// circle too small to satisfy the leakage cap).
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),

    /// Arguments outside the documented domain of an operation.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// Function argument outside its mathematical domain.
    #[error("domain error: {0}")]
    DomainError(String),

    /// A search would exceed the configured evaluation budget.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Every solver start failed feasibility restoration.
    #[error("no feasible point: {0}")]
    NoFeasiblePoint(String),

    /// A reported objective exceeds a certified upper bound; indicates a bug
    /// in either the solver or the bound evaluation.
    #[error("bound violation: {0}")]
    BoundViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
