//! Variational state energies and the bare-mode perturbation-theory
//! baseline.
//!
//! A matter state `a` dressed by the screened photon vacuum carries
//!
//! ```text
//! E_a = E_a^0 + (1/2) sum_n (w_n - w_n^0) + sum_occ w_i + dE_a
//! ```
//!
//! The zero-point difference is the Casimir term of the single emitter;
//! photon quasiparticles add whole interacting quanta; `dE_a` is the
//! second-order shift from the momentum coupling evaluated with the
//! interacting modes. All sums run over the `M` solved modes, and every
//! reported energy carries its cutoff and the half-cutoff sensitivity:
//! the zero-point tail falls off like 1/n and is reported, never
//! extrapolated.

use serde::{Deserialize, Serialize};

use crate::error::{Result, VarQedError};
use crate::matter::MatterEigensystem;
use crate::modes::{solve_frequencies, CavityGeometry, InteractingModeSet};

/// Denominators closer to zero than this (eV) count as resonant.
const RESONANCE_TOL: f64 = 1e-10;

/// Casimir zero-point sum and its estimated continuation.
#[derive(Debug, Clone, Copy)]
pub struct CasimirSum {
    /// `(1/2) sum_{n<=M} (w_n - w_n^0)` in eV.
    pub value: f64,
    /// First-order estimate of the next octave `M+1..2M` of the sum,
    /// `sum lambda sin^2(n pi d / L) / (2 L w_n^0)`. The full tail is
    /// logarithmic; this is a cutoff-change indicator, not a completion.
    pub tail_next_octave: f64,
}

/// Zero-point energy difference between interacting and bare modes.
pub fn casimir_energy(mode_set: &InteractingModeSet) -> CasimirSum {
    let m = mode_set.len();
    let value = 0.5
        * (0..m)
            .map(|i| mode_set.omega(i) - mode_set.bare_omega(i))
            .sum::<f64>();
    let cavity = &mode_set.cavity;
    let lam = cavity.coupling;
    let tail_next_octave = (m..2 * m)
        .map(|i| {
            let s = ((i + 1) as f64 * std::f64::consts::PI * cavity.emitter_position
                / cavity.length)
                .sin();
            lam * s * s / (2.0 * cavity.length * cavity.bare_omega(i))
        })
        .sum();
    CasimirSum {
        value,
        tail_next_octave,
    }
}

/// Second-order momentum-coupling shift of matter state `a` with no
/// photon quasiparticles, evaluated with the interacting modes:
///
/// ```text
/// dE_a = sum_i sum_{b != a} [lambda / (2 m w_i)] F_i(d)^2 |p_ba|^2
///        / (E_a^0 - E_b^0 - w_i)
/// ```
///
/// Decoupled modes have `F_i(d) = 0` and drop out exactly. For the
/// ground state every denominator is negative, so the shift is `<= 0`.
/// An exact resonance in a denominator is an error: the second-order
/// formula is invalid there, and hiding it would corrupt comparisons.
pub fn correlation_shift(
    eig: &MatterEigensystem,
    mode_set: &InteractingModeSet,
    state: usize,
) -> Result<f64> {
    correlation_shift_occupied(eig, mode_set, state, &[])
}

/// Second-order shift for a state with photon quasiparticles present.
///
/// Occupation enters the usual way: emission into mode `i` is enhanced
/// by `n_i + 1` and absorption of a present quantum opens the
/// `n_i / (E_a^0 - E_b^0 + w_i)` channel. With an empty occupation this
/// reduces to `correlation_shift`.
pub fn correlation_shift_occupied(
    eig: &MatterEigensystem,
    mode_set: &InteractingModeSet,
    state: usize,
    occupation: &[usize],
) -> Result<f64> {
    let n_levels = eig.n_levels();
    assert!(state < n_levels, "matter state index out of range");
    let lam = mode_set.cavity.coupling;
    if lam == 0.0 {
        return Ok(0.0);
    }
    let mass = eig.mass;
    let e_a = eig.energies[state];

    let mut counts = vec![0usize; mode_set.len()];
    for &i in occupation {
        counts[i] += 1;
    }

    let mut shift = 0.0;
    #[allow(clippy::needless_range_loop)]
    for i in 0..mode_set.len() {
        let f_d = mode_set.amplitude_at_emitter(i);
        if f_d == 0.0 {
            continue;
        }
        let omega = mode_set.omega(i);
        let prefactor = lam / (2.0 * mass * omega) * f_d * f_d;
        let n_i = counts[i] as f64;
        for b in 0..n_levels {
            if b == state {
                continue;
            }
            let p2 = eig.momentum_elements[(b, state)].norm_sqr();
            if p2 == 0.0 {
                continue;
            }
            let emission = e_a - eig.energies[b] - omega;
            if emission.abs() < RESONANCE_TOL {
                return Err(VarQedError::ResonantDenominator {
                    a: state,
                    b,
                    mode: i,
                    delta: emission,
                });
            }
            shift += prefactor * p2 * (n_i + 1.0) / emission;
            if counts[i] > 0 {
                let absorption = e_a - eig.energies[b] + omega;
                if absorption.abs() < RESONANCE_TOL {
                    return Err(VarQedError::ResonantDenominator {
                        a: state,
                        b,
                        mode: i,
                        delta: absorption,
                    });
                }
                shift += prefactor * p2 * n_i / absorption;
            }
        }
    }
    Ok(shift)
}

/// Per-state energy decomposition. `total` is the exact sum of the four
/// parts; `cutoff_sensitivity` is the change when the mode cutoff is
/// halved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub matter_index: usize,
    /// Occupied interacting-mode indices (0-based), one entry per
    /// quantum, sorted ascending.
    pub photon_occupation: Vec<usize>,
    pub bare_matter_energy: f64,
    pub casimir_term: f64,
    pub photon_quasiparticle_term: f64,
    pub correlation_term: f64,
    pub total: f64,
    pub mode_cutoff: usize,
    pub cutoff_sensitivity: f64,
}

impl EnergyBreakdown {
    /// Deterministic state label, e.g. `a0`, `a1+p1`, `a0+p1+p1` with
    /// 1-based photon mode numbers.
    pub fn label(&self) -> String {
        let mut s = format!("a{}", self.matter_index);
        for &i in &self.photon_occupation {
            s.push_str(&format!("+p{}", i + 1));
        }
        s
    }

    /// Total with the correlation term removed: the pure quasiparticle
    /// (zero-point + quanta) energy that upper-bounds the ground state.
    pub fn total_without_correlation(&self) -> f64 {
        self.bare_matter_energy + self.casimir_term + self.photon_quasiparticle_term
    }
}

/// Assemble the variational energy of `(state, occupation)`.
///
/// The occupation lists interacting-mode indices, one per quantum. The
/// cutoff sensitivity re-solves the mode problem at `M/2` and rebuilds
/// the same state; occupied modes beyond the halved set keep their
/// full-cutoff frequencies so the sensitivity reflects the mode sums.
pub fn variational_energy(
    eig: &MatterEigensystem,
    mode_set: &InteractingModeSet,
    state: usize,
    occupation: &[usize],
) -> Result<EnergyBreakdown> {
    let full = assemble(eig, mode_set, state, occupation)?;
    let m_half = (mode_set.len() / 2).max(1);
    let half_set = solve_frequencies(&mode_set.cavity, m_half)?;
    let mut half = assemble(eig, &half_set, state, &[])?;
    // photon quanta at half cutoff: reuse full-set frequencies for modes
    // the halved set no longer contains
    for &i in occupation {
        half.3 += if i < m_half {
            half_set.omega(i)
        } else {
            mode_set.omega(i)
        };
    }
    let half_total = half.0 + half.1 + half.2 + half.3;
    let (bare, cas, corr, photon) = full;
    let total = bare + cas + photon + corr;
    Ok(EnergyBreakdown {
        matter_index: state,
        photon_occupation: {
            let mut occ = occupation.to_vec();
            occ.sort_unstable();
            occ
        },
        bare_matter_energy: bare,
        casimir_term: cas,
        photon_quasiparticle_term: photon,
        correlation_term: corr,
        total,
        mode_cutoff: mode_set.len(),
        cutoff_sensitivity: (total - half_total).abs(),
    })
}

/// (bare, casimir, correlation, photon) for one state at one cutoff.
fn assemble(
    eig: &MatterEigensystem,
    mode_set: &InteractingModeSet,
    state: usize,
    occupation: &[usize],
) -> Result<(f64, f64, f64, f64)> {
    let cas = casimir_energy(mode_set).value;
    let corr = correlation_shift_occupied(eig, mode_set, state, occupation)?;
    // fold from +0.0: an empty `sum()` yields -0.0, which would leak
    // into reports
    let photon: f64 = occupation
        .iter()
        .fold(0.0, |acc, &i| acc + mode_set.omega(i));
    Ok((eig.energies[state], cas, corr, photon))
}

/// Perturbation theory in the bare matter and photon states: first-order
/// ponderomotive shift plus the second-order momentum shift, both with
/// bare modes and frequencies,
///
/// ```text
/// E_a^PT = E_a^0 + sum_i lambda F_i^0(d)^2 / (4 w_i^0)
///        + sum_i sum_b [lambda / (2 m w_i^0)] F_i^0(d)^2 |p_ba|^2
///          / (E_a^0 - E_b^0 - w_i^0)
/// ```
///
/// A bare mode resonant with a matter transition is an error; that bare
/// resonance is exactly the failure mode the screened modes avoid.
pub fn bare_pt_energy(
    eig: &MatterEigensystem,
    cavity: &CavityGeometry,
    n_modes: usize,
    state: usize,
) -> Result<f64> {
    let lam = cavity.coupling;
    let e_a = eig.energies[state];
    if lam == 0.0 {
        return Ok(e_a);
    }
    let mut energy = e_a;
    for i in 0..n_modes {
        let f0 = cavity.bare_profile(i, cavity.emitter_position);
        let w0 = cavity.bare_omega(i);
        energy += lam * f0 * f0 / (4.0 * w0);
        let prefactor = lam / (2.0 * eig.mass * w0) * f0 * f0;
        for b in 0..eig.n_levels() {
            if b == state {
                continue;
            }
            let p2 = eig.momentum_elements[(b, state)].norm_sqr();
            if p2 == 0.0 {
                continue;
            }
            let den = e_a - eig.energies[b] - w0;
            if den.abs() < RESONANCE_TOL {
                return Err(VarQedError::ResonantDenominator {
                    a: state,
                    b,
                    mode: i,
                    delta: den,
                });
            }
            energy += prefactor * p2 / den;
        }
    }
    Ok(energy)
}

/// Quasiparticle occupations enumerated for the spectrum: up to
/// `max_quanta` total over the lowest `n_low` modes.
pub fn enumerate_occupations(n_low: usize, max_quanta: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    if max_quanta >= 1 {
        for i in 0..n_low {
            out.push(vec![i]);
        }
    }
    if max_quanta >= 2 {
        for i in 0..n_low {
            for j in i..n_low {
                out.push(vec![i, j]);
            }
        }
    }
    assert!(
        max_quanta <= 2,
        "occupations beyond two quanta are not enumerated"
    );
    out
}

/// The `k` lowest variational levels over matter states and photon
/// occupations with at most two quanta in the lowest ten modes.
pub fn spectrum(
    eig: &MatterEigensystem,
    mode_set: &InteractingModeSet,
    k: usize,
) -> Result<Vec<EnergyBreakdown>> {
    assert!(k >= 1);
    let n_low = mode_set.len().min(10);
    let mut levels = Vec::new();
    for occ in enumerate_occupations(n_low, 2) {
        for a in 0..eig.n_levels() {
            levels.push(variational_energy(eig, mode_set, a, &occ)?);
        }
    }
    levels.sort_by(|x, y| x.total.partial_cmp(&y.total).unwrap());
    levels.truncate(k);
    Ok(levels)
}
