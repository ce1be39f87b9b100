//! Error types shared across the toolkit.

/// Errors produced by body construction, convolution, and solver routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or out-of-contract input (non-unit direction, bad kernel
    /// name, mismatched degrees, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The body is lower-dimensional where a full-dimensional one is needed.
    #[error("degenerate body: {0}")]
    Degenerate(String),

    /// A numeric procedure failed (non-integrable profile, unbounded
    /// halfspace intersection, ...).
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A prescribed measure cannot be the surface area measure of any body.
    #[error("infeasible measure: {0}")]
    Infeasible(String),

    /// The Minkowski solver exhausted its iteration budget. Carries the
    /// residual of the best iterate.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
