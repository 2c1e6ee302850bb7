//! Tight-binding emitter model: construction, diagonalization, momentum
//! matrix elements, and Thomas-Reiche-Kuhn (TRK) calibration of the site
//! length.
//!
//! The emitter is an `n_levels`-site chain with on-site potentials `V_i`
//! and uniform hopping `t`. The momentum operator is
//! `p = (-i hbar / R) sum_i (|i><i+1| - |i+1><i|)`, where the site length
//! `R` is either given or chosen so that the TRK sum rule
//! `(2/m) sum_{i != g} |p_ig|^2 / (E_i - E_g) = 1` holds exactly. The sum
//! rule bounds how strongly a discrete-level model may couple through the
//! momentum operator, so enforcing it keeps coupling sweeps physical.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, VarQedError};

/// Relative threshold below which the ground state counts as degenerate.
const DEGENERACY_REL_TOL: f64 = 1e-10;

/// Site length: fixed value in natural units (1/eV), or TRK-calibrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SiteLength {
    /// Calibrate so the TRK sum equals one.
    Auto,
    /// Fixed value in 1/eV.
    Fixed(f64),
}

/// Definition of the multilevel emitter.
///
/// Energies in eV, `mass` as a rest energy in eV, `charge` in units of
/// the elementary charge. `site_potentials` must have length `n_levels`;
/// the last entry extends the tridiagonal form so every site may carry a
/// potential.
#[derive(Debug, Clone, PartialEq)]
pub struct EmitterSpec {
    pub n_levels: usize,
    pub site_potentials: Vec<f64>,
    pub hopping: f64,
    pub site_length: SiteLength,
    pub mass: f64,
    pub charge: f64,
}

impl EmitterSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_levels < 2 {
            return Err(VarQedError::InvalidEmitter(format!(
                "n_levels = {} but at least 2 levels are required",
                self.n_levels
            )));
        }
        if self.site_potentials.len() != self.n_levels {
            return Err(VarQedError::InvalidEmitter(format!(
                "site_potentials has length {} but n_levels = {}",
                self.site_potentials.len(),
                self.n_levels
            )));
        }
        if self.hopping == 0.0 || !self.hopping.is_finite() {
            return Err(VarQedError::InvalidEmitter(format!(
                "hopping t = {} must be finite and nonzero",
                self.hopping
            )));
        }
        if !(self.mass > 0.0) {
            return Err(VarQedError::InvalidEmitter(format!(
                "mass = {} must be positive",
                self.mass
            )));
        }
        if let SiteLength::Fixed(r) = self.site_length {
            if !(r > 0.0) {
                return Err(VarQedError::InvalidEmitter(format!(
                    "site_length R = {r} must be positive"
                )));
            }
        }
        if !(self.charge >= 0.0) {
            return Err(VarQedError::InvalidEmitter(format!(
                "charge = {} must be non-negative",
                self.charge
            )));
        }
        Ok(())
    }

    /// Resolve the site length, running TRK calibration when `Auto`.
    pub fn resolved_site_length(&self) -> Result<f64> {
        match self.site_length {
            SiteLength::Fixed(r) => Ok(r),
            SiteLength::Auto => calibrate_site_length(self),
        }
    }

    /// Full pipeline: validate, build, diagonalize, momentum matrix.
    pub fn eigensystem(&self) -> Result<MatterEigensystem> {
        self.validate()?;
        let h = build_matter_hamiltonian(self)?;
        let (energies, eigenvectors) = diagonalize_matter(&h)?;
        let r = self.resolved_site_length()?;
        let momentum_elements = momentum_matrix(r, &eigenvectors);
        Ok(MatterEigensystem {
            energies,
            eigenvectors,
            momentum_elements,
            site_length: r,
            mass: self.mass,
        })
    }
}

/// Diagonalized emitter: ascending energies, orthonormal real
/// eigenvectors (columns), and momentum matrix elements in the energy
/// eigenbasis. The momentum matrix is Hermitian and purely imaginary in
/// this model, `p_ab = -conj(p_ba) = i Im(p_ab)`.
#[derive(Debug, Clone)]
pub struct MatterEigensystem {
    pub energies: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
    pub momentum_elements: DMatrix<Complex64>,
    /// Resolved site length R in 1/eV.
    pub site_length: f64,
    /// Emitter mass as a rest energy in eV.
    pub mass: f64,
}

impl MatterEigensystem {
    pub fn n_levels(&self) -> usize {
        self.energies.len()
    }

    /// Imaginary parts of the momentum matrix as a real antisymmetric
    /// matrix; the full element is `p_ab = i * p_imag[(a, b)]`.
    pub fn p_imag(&self) -> DMatrix<f64> {
        self.momentum_elements.map(|z| z.im)
    }
}

/// Build the real symmetric tridiagonal emitter Hamiltonian.
pub fn build_matter_hamiltonian(spec: &EmitterSpec) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let n = spec.n_levels;
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = spec.site_potentials[i];
    }
    for i in 0..n - 1 {
        h[(i, i + 1)] = spec.hopping;
        h[(i + 1, i)] = spec.hopping;
    }
    Ok(h)
}

/// Dense symmetric eigensolve with ascending eigenvalues and a
/// deterministic sign convention: the largest-magnitude component of each
/// eigenvector is made positive (lowest index wins ties), so momentum
/// matrix elements are reproducible across eigensolver implementations.
pub fn diagonalize_matter(h: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = h.nrows();
    let sym = nalgebra::SymmetricEigen::try_new(h.clone(), 1e-14, 0).ok_or_else(|| {
        VarQedError::EigensolverFailure(format!("symmetric eigensolve on {n}x{n} matrix"))
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sym.eigenvalues[i].partial_cmp(&sym.eigenvalues[j]).unwrap());

    let mut energies = Vec::with_capacity(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        energies.push(sym.eigenvalues[src]);
        let mut col = sym.eigenvectors.column(src).clone_owned();
        let mut k_max = 0;
        for k in 1..n {
            if col[k].abs() > col[k_max].abs() {
                k_max = k;
            }
        }
        if col[k_max] < 0.0 {
            col.neg_mut();
        }
        vectors.set_column(dst, &col);
    }
    Ok((energies, vectors))
}

/// Momentum matrix in the energy eigenbasis.
///
/// In the site basis `p = (-i hbar / R) sum_i (|i><i+1| - |i+1><i|)`;
/// with real eigenvectors the result is purely imaginary with zero
/// diagonal.
pub fn momentum_matrix(site_length: f64, eigenvectors: &DMatrix<f64>) -> DMatrix<Complex64> {
    let n = eigenvectors.nrows();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n - 1 {
        k[(i, i + 1)] = 1.0;
        k[(i + 1, i)] = -1.0;
    }
    let k_eig = eigenvectors.transpose() * k * eigenvectors;
    DMatrix::from_fn(n, n, |a, b| {
        Complex64::new(0.0, -k_eig[(a, b)] / site_length)
    })
}

/// TRK sum `(2/m) sum_{i != g} |p_ig|^2 / (E_i - E_g)`.
///
/// Errors when any level is degenerate with the chosen ground index, as
/// the sum rule is ill-defined there.
pub fn trk_sum(eig: &MatterEigensystem, mass: f64, ground: usize) -> Result<f64> {
    let n = eig.n_levels();
    let e_scale = eig
        .energies
        .iter()
        .fold(0.0_f64, |acc, &e| acc.max(e.abs()))
        .max(f64::MIN_POSITIVE);
    let e_g = eig.energies[ground];
    let mut sum = 0.0;
    for i in 0..n {
        if i == ground {
            continue;
        }
        let gap = eig.energies[i] - e_g;
        if gap.abs() < DEGENERACY_REL_TOL * e_scale {
            return Err(VarQedError::DegenerateGroundState { i, gap });
        }
        let p = eig.momentum_elements[(i, ground)];
        sum += p.norm_sqr() / gap;
    }
    Ok(2.0 * sum / mass)
}

/// Calibrate R so the TRK sum equals one.
///
/// Since `trk_sum` scales as 1/R^2 this is closed form:
/// `R = R_ref * sqrt(trk_sum(R_ref))` for any reference length. The
/// reference is `sqrt(hbar / (2 m |t|))`, the scale of the calibrated
/// answer.
pub fn calibrate_site_length(spec: &EmitterSpec) -> Result<f64> {
    spec.validate()?;
    let h = build_matter_hamiltonian(spec)?;
    let (energies, eigenvectors) = diagonalize_matter(&h)?;
    let r_ref = (1.0 / (2.0 * spec.mass * spec.hopping.abs())).sqrt();
    let reference = MatterEigensystem {
        momentum_elements: momentum_matrix(r_ref, &eigenvectors),
        energies,
        eigenvectors,
        site_length: r_ref,
        mass: spec.mass,
    };
    let s = trk_sum(&reference, spec.mass, 0)?;
    if !(s > 0.0) {
        return Err(VarQedError::NonPositiveSumRule(s));
    }
    Ok(r_ref * s.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::ELECTRON_MASS_EV;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(n: usize, v: Vec<f64>, t: f64) -> EmitterSpec {
        EmitterSpec {
            n_levels: n,
            site_potentials: v,
            hopping: t,
            site_length: SiteLength::Auto,
            mass: ELECTRON_MASS_EV,
            charge: 1.0,
        }
    }

    #[test]
    fn hamiltonian_two_level() {
        let h = build_matter_hamiltonian(&spec(2, vec![0.0, 0.0], -1.0)).unwrap();
        assert_eq!(h[(0, 0)], 0.0);
        assert_eq!(h[(0, 1)], -1.0);
        assert_eq!(h[(1, 0)], -1.0);
        assert_eq!(h[(1, 1)], 0.0);
    }

    #[test]
    fn hamiltonian_three_level_with_potential() {
        let h = build_matter_hamiltonian(&spec(3, vec![0.5, 0.0, 0.0], 0.2)).unwrap();
        assert_eq!(h[(0, 0)], 0.5);
        assert_eq!(h[(1, 1)], 0.0);
        assert_eq!(h[(0, 1)], 0.2);
        assert_eq!(h[(1, 2)], 0.2);
        assert_eq!(h[(0, 2)], 0.0);
    }

    #[test]
    fn two_level_eigenvalues() {
        let h = build_matter_hamiltonian(&spec(2, vec![0.0, 0.0], -1.0)).unwrap();
        let (e, _) = diagonalize_matter(&h).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-14);
        assert!((e[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_matrix_identity_vectors() {
        let h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let (e, v) = diagonalize_matter(&h).unwrap();
        assert_eq!(e, vec![1.0, 2.0, 3.0]);
        // columns are (possibly permuted) identity vectors, positive sign
        for c in 0..3 {
            let col = v.column(c);
            let ones: Vec<f64> = col
                .iter()
                .filter(|x| (x.abs() - 1.0).abs() < 1e-14)
                .cloned()
                .collect();
            assert_eq!(ones.len(), 1);
            assert!(ones[0] > 0.0);
        }
    }

    #[test]
    fn three_site_analytic_spectrum() {
        // E_k = 2 t cos(k pi / 4), k = 1..3 for V = 0, t = -1
        let h = build_matter_hamiltonian(&spec(3, vec![0.0; 3], -1.0)).unwrap();
        let (e, _) = diagonalize_matter(&h).unwrap();
        let s = 2.0_f64.sqrt();
        assert!((e[0] + s).abs() < 1e-14);
        assert!(e[1].abs() < 1e-14);
        assert!((e[2] - s).abs() < 1e-14);
    }

    #[test]
    fn eigen_residual_and_orthonormality() {
        let sp = spec(6, vec![0.3, -0.1, 0.0, 0.2, -0.4, 0.1], -0.7);
        let h = build_matter_hamiltonian(&sp).unwrap();
        let (e, v) = diagonalize_matter(&h).unwrap();
        let e_max = e.iter().fold(0.0_f64, |a, &x| a.max(x.abs()));
        let gram = v.transpose() * &v;
        let mut ortho_dev = 0.0_f64;
        for i in 0..6 {
            for j in 0..6 {
                let target = if i == j { 1.0 } else { 0.0 };
                ortho_dev = ortho_dev.max((gram[(i, j)] - target).abs());
            }
        }
        assert!(ortho_dev < 1e-12, "orthonormality deviation {ortho_dev}");
        for (a, &e_a) in e.iter().enumerate() {
            let resid = (&h * v.column(a) - e_a * v.column(a)).amax();
            assert!(resid <= 1e-12 * e_max, "residual {resid}");
        }
    }

    #[test]
    fn momentum_two_level_magnitude() {
        // symmetric/antisymmetric eigenvectors give |p_eg| = hbar / R
        let sp = spec(2, vec![0.0, 0.0], -1.0);
        let eig = sp.eigensystem().unwrap();
        let r = eig.site_length;
        assert!((eig.momentum_elements[(1, 0)].norm() - 1.0 / r).abs() < 1e-10 / r);
        assert!(eig.momentum_elements[(1, 0)].re.abs() < 1e-14 / r);
    }

    #[test]
    fn momentum_diagonal_zero_and_hermitian() {
        let sp = spec(5, vec![0.2, 0.0, -0.3, 0.1, 0.0], -0.5);
        let eig = sp.eigensystem().unwrap();
        let p = &eig.momentum_elements;
        let scale = p.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
        for a in 0..5 {
            assert!(p[(a, a)].norm() < 1e-14 * scale);
            for b in 0..5 {
                assert!((p[(a, b)] - p[(b, a)].conj()).norm() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn momentum_three_site_against_analytic_vectors() {
        // V = 0, t < 0: eigenvectors of the 3-site chain are
        // (1, s2, 1)/2, (1, 0, -1)/s2, (1, -s2, 1)/2 with s2 = sqrt(2).
        let sp = spec(3, vec![0.0; 3], -1.0);
        let eig = sp.eigensystem().unwrap();
        let r = eig.site_length;
        let s2 = 2.0_f64.sqrt();
        let v1 = [0.5, s2 / 2.0, 0.5];
        let v3 = [0.5, -s2 / 2.0, 0.5];
        // p_13 = (-i/R) * v1^T K v3
        let mut k13 = 0.0;
        let k = [[0.0, 1.0, 0.0], [-1.0, 0.0, 1.0], [0.0, -1.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                k13 += v1[i] * k[i][j] * v3[j];
            }
        }
        let expected = Complex64::new(0.0, -k13 / r);
        assert!((eig.momentum_elements[(0, 2)] - expected).norm() < 1e-12 / r);
    }

    #[test]
    fn trk_two_level_closed_form() {
        let m = ELECTRON_MASS_EV;
        let mut sp = spec(2, vec![0.0, 0.0], -1.0);
        let r_star = 1.0 / (m * 1.0_f64).sqrt();
        sp.site_length = SiteLength::Fixed(r_star);
        let eig = sp.eigensystem().unwrap();
        assert!((trk_sum(&eig, m, 0).unwrap() - 1.0).abs() < 1e-12);
        // doubling R quarters the sum
        sp.site_length = SiteLength::Fixed(2.0 * r_star);
        let eig2 = sp.eigensystem().unwrap();
        assert!((trk_sum(&eig2, m, 0).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn calibrate_two_level_closed_form() {
        let m = ELECTRON_MASS_EV;
        let sp = spec(2, vec![0.0, 0.0], -1.0);
        let r = calibrate_site_length(&sp).unwrap();
        assert!((r - 1.0 / m.sqrt()).abs() < 1e-12 / m.sqrt());
        // t -> 4t halves the calibrated R
        let sp4 = spec(2, vec![0.0, 0.0], -4.0);
        let r4 = calibrate_site_length(&sp4).unwrap();
        assert!((r4 - r / 2.0).abs() < 1e-12 * r);
    }

    #[test]
    fn trk_after_calibration_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 2..=8 {
            for _ in 0..20 {
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
                let t = if rng.gen_bool(0.5) { -1.0 } else { 1.0 } * rng.gen_range(0.1..1.0);
                let sp = spec(n, v, t);
                let eig = match sp.eigensystem() {
                    Ok(e) => e,
                    // random potentials can produce a near-degenerate ground state
                    Err(VarQedError::DegenerateGroundState { .. }) => continue,
                    Err(e) => panic!("{e}"),
                };
                let s = trk_sum(&eig, sp.mass, 0).unwrap();
                assert!((s - 1.0).abs() <= 1e-12, "n={n} trk={s}");
            }
        }
    }

    #[test]
    fn trk_scaling_law() {
        let sp = spec(4, vec![0.1, 0.0, -0.2, 0.05], -0.4);
        let h = build_matter_hamiltonian(&sp).unwrap();
        let (energies, eigenvectors) = diagonalize_matter(&h).unwrap();
        let make = |r: f64| MatterEigensystem {
            energies: energies.clone(),
            eigenvectors: eigenvectors.clone(),
            momentum_elements: momentum_matrix(r, &eigenvectors),
            site_length: r,
            mass: sp.mass,
        };
        let r0 = 1e-3;
        let s1 = trk_sum(&make(r0), sp.mass, 0).unwrap();
        let s3 = trk_sum(&make(3.0 * r0), sp.mass, 0).unwrap();
        assert!((s3 - s1 / 9.0).abs() < 1e-12 * s1);
    }

    #[test]
    fn degenerate_ground_errors() {
        // V chosen so the two lowest levels coincide: disconnected-like
        // limit via t tiny and equal potentials is messy; instead use a
        // hand-built eigensystem with an exact degeneracy.
        let eig = MatterEigensystem {
            energies: vec![0.0, 0.0, 1.0],
            eigenvectors: DMatrix::identity(3, 3),
            momentum_elements: momentum_matrix(1.0, &DMatrix::identity(3, 3)),
            site_length: 1.0,
            mass: 1.0,
        };
        assert!(matches!(
            trk_sum(&eig, 1.0, 0),
            Err(VarQedError::DegenerateGroundState { .. })
        ));
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(spec(1, vec![0.0], -1.0).validate().is_err());
        assert!(spec(2, vec![0.0], -1.0).validate().is_err());
        assert!(spec(2, vec![0.0, 0.0], 0.0).validate().is_err());
        let mut sp = spec(2, vec![0.0, 0.0], -1.0);
        sp.mass = -1.0;
        assert!(sp.validate().is_err());
        sp.mass = 1.0;
        sp.site_length = SiteLength::Fixed(0.0);
        assert!(sp.validate().is_err());
    }
}
