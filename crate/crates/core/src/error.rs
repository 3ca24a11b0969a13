use alloc::string::String;

/// Errors raised by constructions and verifiers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("semi-inner product is not positive (min eigenvalue {min_eigenvalue:e})")]
    PositivityFailure { min_eigenvalue: f64 },
    #[error("bimodule property violated (residual {residual:e})")]
    BimoduleViolation { residual: f64 },
    #[error("tilde operator does not annihilate the Gram kernel (residual {residual:e})")]
    IllDefinedTilde { residual: f64 },
    #[error("tilde operator is not left invertible (min eigenvalue of T*T is {min_eigenvalue:e})")]
    NotLeftInvertible { min_eigenvalue: f64 },
    #[error("representation is not concave (min eigenvalue {min_eigenvalue:e})")]
    NotConcave { min_eigenvalue: f64 },
    #[error("subspace is not invariant under the algebra (residual {residual:e})")]
    NotSigmaInvariant { residual: f64 },
    #[error("subspace is not invariant for the representation (residual {residual:e})")]
    NotInvariant { residual: f64 },
    #[error("representation is not isometric (residual {residual:e})")]
    NotIsometric { residual: f64 },
    #[error("operators do not commute (residual {residual:e})")]
    CommutationViolation { residual: f64 },
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;
