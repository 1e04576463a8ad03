use thiserror::Error;

/// Errors shared across the covariance-matrix toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("state is not physical (smallest symplectic eigenvalue {nu_min})")]
    NonPhysicalState { nu_min: f64 },

    #[error("standard-form invariants are degenerate: {0}")]
    DegenerateInvariants(String),

    #[error("state is separable where an entangled state is required")]
    NotEntangled,

    #[error("degenerate parameter limit: {0}")]
    DegenerateState(String),

    #[error("measured-quadrature covariance is singular (det {0:e})")]
    SingularConditioning(f64),

    #[error("optimizer did not converge (best objective spread {0:e})")]
    OptimizerDidNotConverge(f64),

    #[error("insufficient samples: {got} < {min}")]
    InsufficientSamples { got: u64, min: u64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
