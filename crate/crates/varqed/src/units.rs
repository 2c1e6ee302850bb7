//! Natural-unit conventions and physical constants.
//!
//! Internally the library works in natural units `hbar = c = eps0 = 1`:
//! energies and angular frequencies are carried in eV, lengths in 1/eV.
//! Conversions to laboratory units (nm, elementary charges, electron
//! masses) happen only at the configuration boundary.

use std::f64::consts::PI;

/// hbar * c in eV * nm (CODATA 2018).
pub const HBAR_C_EV_NM: f64 = 197.326_980_4;

/// Electron rest energy in eV (CODATA 2018).
pub const ELECTRON_MASS_EV: f64 = 510_998.95;

/// Fine-structure constant.
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

/// Square of the elementary charge in natural units, e^2 = 4 pi alpha.
pub const E_SQUARED: f64 = 4.0 * PI * FINE_STRUCTURE;

/// Convert a length from nm to natural units (1/eV).
pub fn length_from_nm(nm: f64) -> f64 {
    nm / HBAR_C_EV_NM
}

/// Convert a length from natural units (1/eV) to nm.
pub fn length_to_nm(inv_ev: f64) -> f64 {
    inv_ev * HBAR_C_EV_NM
}

/// Convert an area from nm^2 to natural units (1/eV^2).
pub fn area_from_nm2(nm2: f64) -> f64 {
    nm2 / (HBAR_C_EV_NM * HBAR_C_EV_NM)
}

/// Coupling constant lambda = q^2 / (m eps0 S) in eV.
///
/// `charge` is in units of the elementary charge, `mass` in eV (rest
/// energy), `area` in 1/eV^2. With eps0 = 1 the combination carries
/// units of energy, and lambda/omega is the dimensionless right-hand
/// side of the screened-mode condition.
pub fn coupling_lambda(charge: f64, mass: f64, area: f64) -> f64 {
    charge * charge * E_SQUARED / (mass * area)
}
