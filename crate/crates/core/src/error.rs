//! Shared error type for the library.

use thiserror::Error;

/// Errors surfaced by the numerical kernel and the decision layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("linear system is singular or ill-conditioned (cond ~ {cond:.3e})")]
    Singular { cond: f64 },

    #[error("eigenvalue iteration failed to converge")]
    EigFailed,

    #[error("I - Phi is singular: 1 lies in the spectrum (spectral radius {radius:.6})")]
    SteinSingular { radius: f64 },

    #[error("Neumann series does not converge (spectral radius {radius:.6})")]
    NotConvergent { radius: f64 },

    #[error("iteration limit reached after {iterations} steps")]
    IterationLimit { iterations: usize },

    #[error("point is not jointly nilpotent (residual {norm:.3e})")]
    NotNilpotent { norm: f64 },

    #[error("Gramian unavailable: {0}")]
    GramianUnavailable(String),

    #[error("points {i} and {j} coincide; interpolation nodes must be pairwise distinct")]
    DuplicatePoints { i: usize, j: usize },

    #[error("node {index} lies on or outside the unit circle (|z| = {modulus:.6})")]
    PointOnBoundary { index: usize, modulus: f64 },

    #[error("map does not preserve Hermiticity (deviation {deviation:.3e})")]
    NotHermiticityPreserving { deviation: f64 },

    #[error("denominator is singular at the argument")]
    SingularDenominator,

    #[error("pole at evaluation point")]
    PoleAtPoint,

    #[error("denominator vanishes at the origin")]
    PoleAtOrigin,

    #[error("not a Schur-class function: {0}")]
    NotSchur(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
