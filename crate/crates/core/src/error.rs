use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// Gradient requested at the zero vector, where every norm Hamiltonian
    /// is multivalued.
    #[error("gradient requested at the zero vector, where it is multivalued")]
    ZeroGradient,

    /// Gradient requested at a tie or kink; reported distinctly from
    /// [`Error::ZeroGradient`] so callers can surface nonuniqueness.
    #[error("gradient is multivalued here: {0}")]
    Nondifferentiable(String),

    #[error("{op} does not accept a pointwise-minimum variant")]
    MinOfUnsupported { op: &'static str },

    #[error("{what}: Newton iteration failed to converge within {iters} iterations")]
    NewtonDiverged { what: &'static str, iters: usize },

    #[error("query point is not strictly exterior to the shape")]
    InteriorQuery,

    #[error("failed to bracket the front-crossing time after {0} expansions")]
    BracketFailed(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
