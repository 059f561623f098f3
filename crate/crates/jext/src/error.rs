//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid conjugation: {0}")]
    ConjugationInvalid(String),

    #[error("mapped frame rank collapsed from {expected} to {got}")]
    RankCollapse { expected: usize, got: usize },

    #[error("frames are not orthogonal (cross residual {residual:.3e})")]
    NotOrthogonal { residual: f64 },

    #[error("domain basis is rank deficient: rank {rank} < {expected}")]
    DegenerateDomain { rank: usize, expected: usize },

    #[error("action vectors are rank deficient: rank {rank} < {expected}")]
    DegenerateRange { rank: usize, expected: usize },

    #[error("subspace is not an operator graph (top block sigma_min {sigma_min:.3e})")]
    NotAGraph { sigma_min: f64 },

    #[error("graph has dimension {got}, expected {expected}")]
    WrongDimension { expected: usize, got: usize },

    #[error("operator is not J-skew-symmetric (residual {residual:.3e})")]
    NotSkewSymmetric { residual: f64 },

    #[error("operator is not J-isometric (residual {residual:.3e})")]
    NotIsometric { residual: f64 },

    #[error("subspace dimension {dim} is not positive even")]
    OddDimension { dim: usize },

    #[error("subspace is not invariant under the conjugation")]
    NotInvariant,

    #[error("map of kind {0} is not a conjugation on the doubled space")]
    NotAConjugation(&'static str),

    #[error(
        "retry budget exhausted after {attempts} attempts \
         (best graph sigma_min {best_sigma_min:.3e}, best structure residual {best_structure:?})"
    )]
    Exhausted {
        attempts: u32,
        best_sigma_min: f64,
        best_structure: Option<f64>,
    },

    #[error("extension verification failed (residual {residual:.3e})")]
    VerificationFailed { residual: f64 },

    #[error("generator self-check failed: {0}")]
    GeneratorFailure(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
