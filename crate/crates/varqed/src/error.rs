//! Error types shared across the solver.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum VarQedError {
    #[error("invalid emitter spec: {0}")]
    InvalidEmitter(String),

    #[error("invalid cavity geometry: {0}")]
    InvalidGeometry(String),

    #[error("eigensolver failed to converge: {0}")]
    EigensolverFailure(String),

    #[error("degenerate ground state: |E_{i} - E_g| = {gap:.3e} eV below threshold")]
    DegenerateGroundState { i: usize, gap: f64 },

    #[error("sum rule ill-defined: trk_sum = {0:.3e} <= 0 at reference length")]
    NonPositiveSumRule(f64),

    #[error("frequency {omega:.12e} is at a cotangent pole")]
    AtPole { omega: f64 },

    #[error("mode solver found {found} roots below bound {bound:.6e} (need {needed})")]
    RootEnumeration {
        found: usize,
        needed: usize,
        bound: f64,
    },

    #[error("degenerate geometry: sin(omega_n (L-d)/c) = {0:.3e} for a coupled mode")]
    DegenerateGeometry(f64),

    #[error(
        "resonant denominator: E_{a} - E_{b} - hbar*omega_{mode} = {delta:.3e} eV; \
         second-order correction is invalid at exact resonance"
    )]
    ResonantDenominator {
        a: usize,
        b: usize,
        mode: usize,
        delta: f64,
    },

    #[error("Fock basis too large: {size} states exceeds budget of {budget}")]
    BasisTooLarge { size: usize, budget: usize },

    #[error("Lanczos did not converge: {converged}/{requested} eigenpairs, worst residual {residual:.3e}")]
    LanczosNonConvergence {
        converged: usize,
        requested: usize,
        residual: f64,
    },

    #[error("config error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, VarQedError>;
