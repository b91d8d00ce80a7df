use thiserror::Error;

/// Errors raised by geometry kernels, oracles, certifiers and the solver.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain where an operation is defined (cut locus,
    /// exponential beyond the supported radius, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition was not met by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Invalid construction parameters or missing capabilities.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical routine produced a non-finite value or failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Root finding was asked to work on an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}")]
    Bracket { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    /// `a cos α + b sin α = c` has no real solution.
    #[error("no intersection: a^2 + b^2 - c^2 = {0}")]
    NoIntersection(f64),

    /// The half-angle closed form divides by `a + c`, which vanished.
    #[error("closed form is degenerate: a + c = {0}")]
    Branch(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
