//! Interpolation for operator-valued Nevanlinna–Pick data, decided through
//! Lyapunov domination between completely positive maps.
//!
//! The carrier objects are tuples of k×k complex matrices ("operator
//! points"); a point tuple Z and target tuple W induce completely positive
//! maps Φ_Z and Φ_W on block-diagonal carriers, and the interpolation
//! question reduces to whether `P = (I − Φ_W)(I − Φ_Z)⁻¹` is completely
//! positive. The crate decides that question exactly where the resolvent
//! exists, refutes it by randomized finite Gramian inequalities elsewhere,
//! and constructs honest interpolants in the classical scalar and jet
//! regimes.
//!
//! Modules, roughly bottom-up:
//!
//! * [`kernel`]: dense complex linear algebra with verdicts instead of raw
//!   numbers (Hermitian eigendecompositions, PSD checks, gated solves).
//! * [`cpmap`]: operator points, completely positive maps in Kraus form,
//!   superoperator and Choi realisations.
//! * [`superharmonic`]: Stein equations, Neumann series, Gramians of
//!   superharmonic elements and purity certificates.
//! * [`funcalc`]: rational functions and their scalar, matrix and jet
//!   evaluations.
//! * [`pickclassic`]: Pick matrices, the Schur recursion, and jet
//!   (Carathéodory–Fejér) interpolation.
//! * [`lyapunov`]: the Pick operator, exact and randomized domination
//!   decisions, witness verification.
//! * [`instancekit`]: problem documents, serialization, seeded generators.

pub mod cpmap;
pub mod error;
pub mod funcalc;
pub mod instancekit;
pub mod kernel;
pub mod lyapunov;
pub mod pickclassic;
pub mod superharmonic;

pub use cpmap::{CpMap, OperatorPoint, Superoperator};
pub use error::{Error, Result};
pub use funcalc::RationalForm;
pub use instancekit::{FeasibleMode, ProblemInstance};
pub use kernel::{CMatrix, CVector, PsdVerdict, ToleranceConfig};
pub use lyapunov::{
    DominationCertificates, DominationStatus, DominationVerdict, DominationWitness, PickOperator,
};
pub use pickclassic::{PickMatrixResult, SchurFn, SchurOutcome};
pub use superharmonic::{BlockHermitian, GramianFactor, PurityVerdict, Truncation};
