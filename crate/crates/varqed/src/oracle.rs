//! Exact diagonalization of the full cavity Hamiltonian in a truncated
//! Fock space.
//!
//! The Hamiltonian is the bare-mode form
//!
//! ```text
//! H = H_matter + sum_i w_i^0 a_i^+ a_i + (q/m) A(d) p + (q^2/2m) A(d)^2
//! ```
//!
//! with `A(d) = sum_i sqrt(hbar / (2 eps0 S w_i^0)) F_i^0(d) (a_i + a_i^+)`.
//! Since the momentum matrix is purely imaginary, rotating each Fock
//! state by `i^(total photons)` turns the momentum coupling real while
//! leaving every eigenvalue untouched; the operator is then real
//! symmetric and all arithmetic stays in f64. In the rotated frame
//!
//! ```text
//! H' = diag(E_a + sum n_i w_i^0 + (m/2) sum g_i^2)
//!      + (B- - B+) (x) Im(p)
//!      + (m/2) (2 B+ B- - B+^2 - B-^2)
//! ```
//!
//! where `B+- = sum_i g_i a_i^(+)` with `g_i = sqrt(lambda / (2 m w_i^0))
//! F_i^0(d)` and the constant is the normal-ordering remainder of the
//! squared vector potential. Elements that would cross the photon cap
//! are dropped (plain hard truncation of the Fock space).
//!
//! The operator is applied matrix-free: at fifty modes the squared
//! vector potential couples thousands of occupation pairs per state, so
//! storing nonzeros is hopeless while recomputing them per iteration is
//! cheap. Each output entry is written by exactly one task, so row-range
//! parallelism is deterministic.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::Result;
use crate::fock::{FockBasis, Truncation};
use crate::lanczos::{lowest_eigenvalues_with, LanczosOptions};
use crate::matter::MatterEigensystem;
use crate::modes::CavityGeometry;

/// Below this dimension the matvec stays single-threaded.
const PARALLEL_THRESHOLD: usize = 50_000;

/// Matrix-free truncated-Fock Hamiltonian in the rotated (real) frame.
#[derive(Debug, Clone)]
pub struct FockHamiltonian {
    pub basis: FockBasis,
    /// Bare mode frequencies w_i^0.
    omega0: Vec<f64>,
    /// Ladder couplings g_i = sqrt(lambda / (2 m w_i^0)) F_i^0(d).
    couplings: Vec<f64>,
    /// Imaginary part of the momentum matrix (real antisymmetric), eV.
    p_imag: DMatrix<f64>,
    /// Matter eigenenergies E_a^0.
    matter_energies: Vec<f64>,
    /// Emitter mass (rest energy, eV).
    mass: f64,
    /// Normal-ordering constant (m/2) sum g_i^2.
    diag_constant: f64,
}

impl FockHamiltonian {
    /// Assemble operator data for `n_modes` bare modes of `cavity` and
    /// the given photon truncation.
    pub fn new(
        eig: &MatterEigensystem,
        cavity: &CavityGeometry,
        n_modes: usize,
        truncation: Truncation,
        budget: Option<usize>,
    ) -> Result<Self> {
        cavity.validate()?;
        let basis = FockBasis::enumerate(eig.n_levels(), n_modes, truncation, budget)?;
        let lam = cavity.coupling;
        let mass = eig.mass;
        let omega0: Vec<f64> = (0..n_modes).map(|i| cavity.bare_omega(i)).collect();
        let couplings: Vec<f64> = (0..n_modes)
            .map(|i| {
                (lam / (2.0 * mass * omega0[i])).sqrt()
                    * cavity.bare_profile(i, cavity.emitter_position)
            })
            .collect();
        let diag_constant = 0.5 * mass * couplings.iter().map(|g| g * g).sum::<f64>();
        Ok(Self {
            basis,
            omega0,
            couplings,
            p_imag: eig.p_imag(),
            matter_energies: eig.energies.clone(),
            mass,
            diag_constant,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Constant `(1/2) sum_i w_i^0` that moves Fock eigenvalues (which
    /// are measured from the bare vacuum) onto the absolute scale shared
    /// with the variational totals: `E_abs = E_Fock + zero_point`.
    pub fn zero_point_convention(&self) -> f64 {
        0.5 * self.omega0.iter().sum::<f64>()
    }

    /// Matrix-free application `out = H' v`.
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.dim());
        assert_eq!(out.len(), self.dim());
        let n_ph = self.basis.n_photon_states();
        let na = self.basis.n_matter;

        // ladder intermediates on the photon lattice (all matter columns)
        let mut u_minus = vec![0.0; v.len()];
        let mut u_plus = vec![0.0; v.len()];
        self.gather_lower(v, &mut u_minus); // B- v
        self.gather_raise(v, &mut u_plus); // B+ v

        // t_plus = B+ (2 u_minus - u_plus); t_minus = B- u_minus
        let mixed: Vec<f64> = u_minus
            .iter()
            .zip(&u_plus)
            .map(|(um, up)| 2.0 * um - up)
            .collect();
        let mut t_plus = vec![0.0; v.len()];
        let mut t_minus = vec![0.0; v.len()];
        self.gather_raise(&mixed, &mut t_plus);
        self.gather_lower(&u_minus, &mut t_minus);

        let half_mass = 0.5 * self.mass;
        let write_row = |r: usize, out_r: &mut f64| {
            let (a, ph) = self.basis.split(r);
            let photons = self.basis.photons(ph);
            let mut diag = self.matter_energies[a] + self.diag_constant;
            for &m in photons {
                diag += self.omega0[m as usize];
            }
            // (B- - B+) (x) Im(p): mix matter components of (u- - u+)
            let mut coupling = 0.0;
            for b in 0..na {
                let p_ab = self.p_imag[(a, b)];
                if p_ab != 0.0 {
                    let s = self.basis.index(b, ph);
                    coupling += p_ab * (u_minus[s] - u_plus[s]);
                }
            }
            *out_r = diag * v[r] + coupling + half_mass * (t_plus[r] - t_minus[r]);
        };

        if self.dim() >= PARALLEL_THRESHOLD {
            out.par_iter_mut()
                .enumerate()
                .for_each(|(r, o)| write_row(r, o));
        } else {
            for (r, o) in out.iter_mut().enumerate() {
                write_row(r, o);
            }
        }
        let _ = n_ph;
    }

    /// `out[s] = (B- v)[s] = sum_i g_i sqrt(n_i(s) + 1) v[raise(s, i)]`,
    /// gathering from every mode that can still be raised.
    fn gather_lower(&self, v: &[f64], out: &mut [f64]) {
        let na = self.basis.n_matter;
        let n_modes = self.basis.n_modes;
        let process = |ph: usize, chunk: &mut [f64]| {
            let photons = self.basis.photons(ph);
            let mut scratch: Vec<u16> = Vec::with_capacity(photons.len() + 1);
            chunk.fill(0.0);
            for mode in 0..n_modes as u16 {
                if let Some(up) = self.basis.photon_rank_raised(photons, mode, &mut scratch) {
                    let n_after = photons.iter().filter(|&&m| m == mode).count() + 1;
                    let amp = self.couplings[mode as usize] * (n_after as f64).sqrt();
                    let src = up * na;
                    for a in 0..na {
                        chunk[a] += amp * v[src + a];
                    }
                }
            }
        };
        self.for_each_photon_chunk(out, process);
    }

    /// `out[s] = (B+ v)[s] = sum_{i occupied} g_i sqrt(n_i(s)) v[lower(s, i)]`.
    fn gather_raise(&self, v: &[f64], out: &mut [f64]) {
        let na = self.basis.n_matter;
        let process = |ph: usize, chunk: &mut [f64]| {
            let photons = self.basis.photons(ph);
            let mut scratch: Vec<u16> = Vec::with_capacity(photons.len());
            chunk.fill(0.0);
            let mut prev: Option<u16> = None;
            for (idx, &mode) in photons.iter().enumerate() {
                if prev == Some(mode) {
                    continue; // one gather per distinct occupied mode
                }
                prev = Some(mode);
                let count = photons[idx..].iter().take_while(|&&m| m == mode).count();
                let down = self.basis.photon_rank_lowered(photons, mode, &mut scratch);
                let amp = self.couplings[mode as usize] * (count as f64).sqrt();
                let src = down * na;
                for a in 0..na {
                    chunk[a] += amp * v[src + a];
                }
            }
        };
        self.for_each_photon_chunk(out, process);
    }

    fn for_each_photon_chunk<F>(&self, out: &mut [f64], process: F)
    where
        F: Fn(usize, &mut [f64]) + Sync,
    {
        let na = self.basis.n_matter;
        if self.dim() >= PARALLEL_THRESHOLD {
            out.par_chunks_mut(na)
                .enumerate()
                .for_each(|(ph, chunk)| process(ph, chunk));
        } else {
            for (ph, chunk) in out.chunks_mut(na).enumerate() {
                process(ph, chunk);
            }
        }
    }

    /// Dense matrix built element-by-element from the coupling rules,
    /// independently of `apply`. Intended for cross-checks on small
    /// bases.
    pub fn dense(&self) -> DMatrix<f64> {
        let dim = self.dim();
        let na = self.basis.n_matter;
        let mut h = DMatrix::zeros(dim, dim);
        let mut scratch: Vec<u16> = Vec::new();
        let mut scratch2: Vec<u16> = Vec::new();
        for ph in 0..self.basis.n_photon_states() {
            let photons = self.basis.photons(ph).to_vec();
            let counts = self.basis.occupation_counts(ph);
            // diagonal
            let photon_energy: f64 = photons.iter().map(|&m| self.omega0[m as usize]).sum();
            for a in 0..na {
                let col = self.basis.index(a, ph);
                h[(col, col)] = self.matter_energies[a] + photon_energy + self.diag_constant;
            }
            // momentum coupling (B- - B+) (x) Im(p): one ladder step
            for mode in 0..self.basis.n_modes as u16 {
                let n_i = counts[mode as usize];
                // lower from this column: row has one quantum less
                if n_i > 0 {
                    let down = self.basis.photon_rank_lowered(&photons, mode, &mut scratch);
                    let x = self.couplings[mode as usize] * (n_i as f64).sqrt();
                    for a in 0..na {
                        for b in 0..na {
                            let val = x * self.p_imag[(b, a)];
                            if val != 0.0 {
                                h[(self.basis.index(b, down), self.basis.index(a, ph))] += val;
                            }
                        }
                    }
                }
                // raise from this column
                if let Some(up) = self.basis.photon_rank_raised(&photons, mode, &mut scratch) {
                    let x = -self.couplings[mode as usize] * ((n_i + 1) as f64).sqrt();
                    for a in 0..na {
                        for b in 0..na {
                            let val = x * self.p_imag[(b, a)];
                            if val != 0.0 {
                                h[(self.basis.index(b, up), self.basis.index(a, ph))] += val;
                            }
                        }
                    }
                }
            }
            // squared vector potential, normal ordered:
            // (m/2)(2 B+ B- - B+^2 - B-^2)
            let m_half = 0.5 * self.mass;
            for i in 0..self.basis.n_modes as u16 {
                let g_i = self.couplings[i as usize];
                if g_i == 0.0 {
                    continue;
                }
                for j in 0..self.basis.n_modes as u16 {
                    let g_j = self.couplings[j as usize];
                    if g_j == 0.0 {
                        continue;
                    }
                    let n_j = counts[j as usize];
                    // 2 B+ B-: lower j then raise i
                    if n_j > 0 {
                        let down = self.basis.photon_rank_lowered(&photons, j, &mut scratch);
                        if let Some(target) = self.basis.photon_rank_raised(
                            self.basis.photons(down),
                            i,
                            &mut scratch2,
                        ) {
                            let n_i_eff = counts[i as usize] - usize::from(i == j);
                            let amp = 2.0
                                * m_half
                                * g_i
                                * g_j
                                * (n_j as f64).sqrt()
                                * ((n_i_eff + 1) as f64).sqrt();
                            for a in 0..na {
                                h[(self.basis.index(a, target), self.basis.index(a, ph))] += amp;
                            }
                        }
                    }
                    // -B+^2 and -B-^2: count each unordered pair once
                    if j < i {
                        continue;
                    }
                    let order_factor = if i == j { 1.0 } else { 2.0 };
                    if let Some(mid) = self.basis.photon_rank_raised(&photons, i, &mut scratch) {
                        if let Some(two_up) =
                            self.basis
                                .photon_rank_raised(self.basis.photons(mid), j, &mut scratch2)
                        {
                            let n_i = counts[i as usize];
                            let n_j_mid = counts[j as usize] + usize::from(i == j);
                            let amp = -m_half
                                * order_factor
                                * g_i
                                * g_j
                                * ((n_i + 1) as f64).sqrt()
                                * ((n_j_mid + 1) as f64).sqrt();
                            for a in 0..na {
                                h[(self.basis.index(a, two_up), self.basis.index(a, ph))] += amp;
                            }
                        }
                    }
                    let n_i = counts[i as usize];
                    if n_i >= 1 && (i != j || n_i >= 2) && (i == j || n_j >= 1) {
                        let n_j_after = n_j - usize::from(i == j);
                        let down_i = self.basis.photon_rank_lowered(&photons, i, &mut scratch);
                        let two_down = self.basis.photon_rank_lowered(
                            self.basis.photons(down_i),
                            j,
                            &mut scratch2,
                        );
                        let amp = -m_half
                            * order_factor
                            * g_i
                            * g_j
                            * (n_i as f64).sqrt()
                            * (n_j_after as f64).sqrt();
                        for a in 0..na {
                            h[(self.basis.index(a, two_down), self.basis.index(a, ph))] += amp;
                        }
                    }
                }
            }
        }
        h
    }

    /// Lowest `k` eigenvalues via Lanczos with full reorthogonalization
    /// and a seeded start vector.
    pub fn lowest_eigenvalues(&self, k: usize, tol: f64, seed: u64) -> Result<Vec<f64>> {
        if self.couplings.iter().all(|&g| g == 0.0) {
            // uncoupled: the operator is diagonal and possibly highly
            // degenerate, which a single-vector Krylov method cannot
            // resolve by multiplicity; sort the diagonal instead
            let mut diag: Vec<f64> = (0..self.dim())
                .map(|r| {
                    let (a, ph) = self.basis.split(r);
                    self.matter_energies[a]
                        + self
                            .basis
                            .photons(ph)
                            .iter()
                            .map(|&m| self.omega0[m as usize])
                            .sum::<f64>()
                })
                .collect();
            diag.sort_by(|x, y| x.partial_cmp(y).unwrap());
            diag.truncate(k);
            return Ok(diag);
        }
        let options = LanczosOptions {
            tol,
            seed,
            ..LanczosOptions::default()
        };
        lowest_eigenvalues_with(|v, out| self.apply(v, out), self.dim(), k, &options)
    }
}

/// Convenience wrapper matching the validation workflow: oracle ground
/// truth for an emitter-cavity pair at the given truncation.
pub fn oracle_lowest(
    eig: &MatterEigensystem,
    cavity: &CavityGeometry,
    n_modes: usize,
    truncation: Truncation,
    k: usize,
    tol: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    FockHamiltonian::new(eig, cavity, n_modes, truncation, None)?.lowest_eigenvalues(k, tol, seed)
}
