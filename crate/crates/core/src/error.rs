use thiserror::Error;

/// Errors surfaced by the kernel. Operations return these instead of
/// panicking, including on degenerate input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("lattice enumeration estimate {estimate} exceeds the cap {cap}")]
    BoxTooLarge { estimate: String, cap: u64 },

    #[error("objective is unbounded over the polyhedron")]
    Unbounded,

    #[error("the point set S is empty")]
    EmptySet,

    #[error("inequality is not valid: rhs {rhs} is below the maximum {max}")]
    NotValid { rhs: String, max: String },

    #[error("inequality is not supporting: rhs {rhs} exceeds the maximum {max}")]
    NotSupporting { rhs: String, max: String },

    #[error("coefficient vector is not integral")]
    NotIntegral,

    #[error("polyhedron is not contained in the convex hull of S")]
    NotInHull,

    #[error("tilting ratio {ratio} does not exceed the bound M = {bound}")]
    PreconditionRatio { ratio: String, bound: String },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("internal invariant breach: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
