//! Ground- and excited-state energies of a multilevel emitter coupled
//! to the many modes of a one-dimensional cavity.
//!
//! The emitter screens the cavity field like a delta-function plasma
//! layer, which blue-shifts every mode and pushes the field out of the
//! emitter's position. State energies are assembled from three pieces:
//! the zero-point difference between screened and bare modes (a
//! single-emitter Casimir energy), whole quanta of the screened modes
//! for photon-excited states, and a second-order momentum-coupling
//! correction evaluated with the screened modes. Two reference methods
//! frame the results: plain perturbation theory in the bare modes, and
//! exact diagonalization in a truncated Fock space.
//!
//! Modules follow the pipeline:
//!
//! - [`matter`]: tight-binding emitter, momentum matrix elements, and
//!   sum-rule calibration of the site length.
//! - [`modes`]: the transcendental screened-mode condition, interacting
//!   frequencies, and normalized profiles.
//! - [`energies`]: Casimir sum, correlation shifts, variational state
//!   assembly, and the bare-mode perturbation baseline.
//! - [`fock`] / [`oracle`] / [`lanczos`]: truncated Fock basis,
//!   matrix-free Hamiltonian, and the iterative eigensolver behind the
//!   exact-diagonalization cross-check.
//! - [`scenario`] / [`sweep`] / [`report`]: configuration files,
//!   parameter sweeps, and machine-readable comparison reports.
//!
//! Internally everything runs in natural units (`hbar = c = eps0 = 1`,
//! energies in eV, lengths in 1/eV); [`units`] holds the conversions
//! used at the configuration boundary. Runnable walkthroughs live in
//! `examples/`.

// `!(x > 0.0)`-style guards are used throughout validation: unlike
// `x <= 0.0` they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod energies;
pub mod error;
pub mod fock;
pub mod lanczos;
pub mod matter;
pub mod modes;
pub mod oracle;
pub mod quad;
pub mod report;
pub mod scenario;
pub mod sweep;
pub mod units;

pub use energies::{
    bare_pt_energy, casimir_energy, correlation_shift, correlation_shift_occupied, spectrum,
    variational_energy, EnergyBreakdown,
};
pub use error::{Result, VarQedError};
pub use fock::{FockBasis, Truncation};
pub use matter::{EmitterSpec, MatterEigensystem, SiteLength};
pub use modes::{mode_residual, solve_frequencies, CavityGeometry, InteractingModeSet};
pub use oracle::FockHamiltonian;
pub use scenario::{load_config, Scenario, ScenarioConfig};
pub use sweep::{convergence_study, run_sweep, ComparisonReport};
