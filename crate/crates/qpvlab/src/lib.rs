//! Library for the QPV_SWAP quantum position-verification protocol.
//!
//! The crate provides the pieces needed to analyze and simulate the protocol
//! end to end:
//!
//! * [`linalg`] — dense complex-matrix kernel over a generic scalar: tensor
//!   products, partial trace/transpose on a labeled bipartition, Hermitian
//!   eigendecomposition, PSD tests.
//! * [`states`] — the two-qubit states and projectors the protocol uses, and
//!   Haar sampling of input pairs with a prescribed overlap.
//! * [`stats`] — exact binomial acceptance regions, the attacker acceptance
//!   cases, and the Gaussian suppression bound.
//! * [`sdp`] — a small dense interior-point SDP engine plus builders for every
//!   PPT discrimination program (single round, parallel repetition, lossy,
//!   min-‖Δ‖₁, trade-off curve).
//! * [`certificates`] — analytic dual optima built in exact rational
//!   arithmetic, with machine-checkable feasibility.
//! * [`attacks`] — LOCC, entanglement-swapping, teleport-guess and
//!   quantum-communication attack strategies.
//! * [`protocol`] — the space-time Monte Carlo engine running verifiers,
//!   prover/attackers, loss and the statistical verdict.
//! * [`cli`] — the `qpvlab` command-line front end.
//!
//! Numeric core is generic over the scalar type via `num-traits`; the concrete
//! aliases below fix the lanes used in practice: `f64` for all floating-point
//! work and `Ratio<i64>` where exact arithmetic is wanted.

pub mod attacks;
pub mod certificates;
pub mod cli;
pub mod linalg;
pub mod protocol;
pub mod scalar;
pub mod sdp;
pub mod states;
pub mod stats;

use thiserror::Error;

/// Exact rational scalar used for certificate construction.
pub type Rational = num_rational::Ratio<i64>;

/// Complex matrix over `f64`, the default numeric lane.
pub type CMatrix = linalg::Mat<f64>;
/// Complex matrix over `f32`.
pub type CMatrix32 = linalg::Mat<f32>;
/// Complex matrix with exact rational entries.
pub type ExactMatrix = linalg::Mat<Rational>;

/// Complex number over `f64`.
pub type C64 = num_complex::Complex<f64>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("matrix has no tensor factorization")]
    MissingFactors,
    #[error("invalid bipartition: {0}")]
    Bipartition(String),
    #[error("matrix not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("eigensolver failed to converge")]
    EighNonConvergence,
    #[error("{0}")]
    Domain(String),
    #[error("sdp: {0}")]
    Sdp(String),
    #[error("attack: {0}")]
    Attack(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 1 for domain errors, 2 for usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Io(_) => 2,
            _ => 1,
        }
    }
}
