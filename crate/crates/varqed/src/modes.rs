//! Plasma-screened cavity modes.
//!
//! A point emitter at `z = d` inside a hard-wall cavity of length `L`
//! screens the field like a delta-function plasma layer. The interacting
//! mode frequencies solve the transcendental condition
//!
//! ```text
//! cot(w d) + cot(w (L - d)) = -lambda / w        (natural units, c = 1)
//! ```
//!
//! whose left side falls monotonically from +inf to -inf between
//! consecutive cotangent poles, so every inter-pole interval holds
//! exactly one root and bisection is unconditionally safe. Poles shared
//! by both cotangent families pin decoupled modes: their profiles have a
//! node at the emitter and their frequencies stay at the bare values
//! `w_n^0 = n pi / L`.
//!
//! Mode indices count from zero; the physical mode number is `i + 1`.

use std::f64::consts::PI;

use crate::error::{Result, VarQedError};
use crate::matter::EmitterSpec;
use crate::quad::GaussLegendre;
use crate::units::coupling_lambda;

/// |sin| below this counts as sitting on a cotangent pole.
const POLE_SIN_TOL: f64 = 1e-14;
/// Relative spacing below which poles of the two families are merged.
const POLE_MERGE_REL: f64 = 1e-12;
/// Relative bisection tolerance for interacting frequencies.
const ROOT_REL_TOL: f64 = 1e-13;

/// Cavity geometry and coupling, in natural units (lengths in 1/eV).
///
/// `coupling` is `lambda = q^2 / (m eps0 S)` in eV; `area` is kept only
/// for reporting when lambda was derived from emitter data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    pub length: f64,
    pub emitter_position: f64,
    pub area: Option<f64>,
    pub coupling: f64,
}

impl CavityGeometry {
    pub fn with_coupling(length: f64, emitter_position: f64, coupling: f64) -> Result<Self> {
        let geom = Self {
            length,
            emitter_position,
            area: None,
            coupling,
        };
        geom.validate()?;
        Ok(geom)
    }

    /// Derive `lambda = q^2 / (m eps0 S)` from the emitter's charge and
    /// mass and the cavity cross-section.
    pub fn from_emitter(
        length: f64,
        emitter_position: f64,
        area: f64,
        emitter: &EmitterSpec,
    ) -> Result<Self> {
        if !(area > 0.0) {
            return Err(VarQedError::InvalidGeometry(format!(
                "area S = {area} must be positive"
            )));
        }
        let geom = Self {
            length,
            emitter_position,
            area: Some(area),
            coupling: coupling_lambda(emitter.charge, emitter.mass, area),
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0) {
            return Err(VarQedError::InvalidGeometry(format!(
                "length L = {} must be positive",
                self.length
            )));
        }
        if !(self.emitter_position > 0.0 && self.emitter_position < self.length) {
            return Err(VarQedError::InvalidGeometry(format!(
                "emitter_position d = {} must satisfy 0 < d < L = {}",
                self.emitter_position, self.length
            )));
        }
        if !(self.coupling >= 0.0) {
            return Err(VarQedError::InvalidGeometry(format!(
                "coupling lambda = {} must be non-negative",
                self.coupling
            )));
        }
        Ok(())
    }

    /// Bare frequency `w_{i+1}^0 = (i+1) pi c / L`.
    pub fn bare_omega(&self, i: usize) -> f64 {
        (i + 1) as f64 * PI / self.length
    }

    /// Bare profile `sqrt(2/L) sin((i+1) pi z / L)`.
    pub fn bare_profile(&self, i: usize, z: f64) -> f64 {
        (2.0 / self.length).sqrt() * ((i + 1) as f64 * PI * z / self.length).sin()
    }

    /// Same geometry with the coupling multiplied by `scale^2` (the
    /// charge enters lambda squared).
    pub fn scaled_charge(&self, charge_scale: f64) -> Self {
        Self {
            coupling: self.coupling * charge_scale * charge_scale,
            ..*self
        }
    }
}

/// Residual of the screened-mode condition,
/// `cot(w d) + cot(w (L-d)) + lambda / w`; its zeros are the interacting
/// frequencies. Signals `AtPole` when either sine vanishes to tolerance.
pub fn mode_residual(cavity: &CavityGeometry, omega: f64) -> Result<f64> {
    let a = omega * cavity.emitter_position;
    let b = omega * (cavity.length - cavity.emitter_position);
    let (sin_a, cos_a) = a.sin_cos();
    let (sin_b, cos_b) = b.sin_cos();
    if sin_a.abs() < POLE_SIN_TOL || sin_b.abs() < POLE_SIN_TOL {
        return Err(VarQedError::AtPole { omega });
    }
    Ok(cos_a / sin_a + cos_b / sin_b + cavity.coupling / omega)
}

/// One interacting mode with the trig branch constants memoized for
/// profile evaluation.
#[derive(Debug, Clone)]
pub struct InteractingMode {
    pub omega: f64,
    pub bare_omega: f64,
    pub decoupled: bool,
    /// Normalization of the piecewise-sine profile (zero-amplitude side
    /// constants folded in); for decoupled modes the bare normalization.
    norm: f64,
    sin_at_emitter: f64,
    sin_far_side: f64,
}

/// Solved interacting modes, ordered by ascending frequency. Mode `i`
/// pairs with bare mode `i` (physical number `i + 1`).
#[derive(Debug, Clone)]
pub struct InteractingModeSet {
    pub cavity: CavityGeometry,
    modes: Vec<InteractingMode>,
}

#[derive(Debug, Clone, Copy)]
struct Pole {
    omega: f64,
    coincident: bool,
}

/// Enumerate all cotangent poles up to `bound`, merging the two families
/// where they collide (relative spacing below `POLE_MERGE_REL`).
fn enumerate_poles(cavity: &CavityGeometry, bound: f64) -> Vec<Pole> {
    let d = cavity.emitter_position;
    let e = cavity.length - d;
    let mut raw: Vec<f64> = Vec::new();
    let mut k = 1usize;
    while k as f64 * PI / d <= bound {
        raw.push(k as f64 * PI / d);
        k += 1;
    }
    k = 1;
    while k as f64 * PI / e <= bound {
        raw.push(k as f64 * PI / e);
        k += 1;
    }
    raw.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut poles: Vec<Pole> = Vec::with_capacity(raw.len());
    for omega in raw {
        match poles.last_mut() {
            Some(last) if (omega - last.omega).abs() <= POLE_MERGE_REL * omega => {
                last.omega = 0.5 * (last.omega + omega);
                last.coincident = true;
            }
            _ => poles.push(Pole {
                omega,
                coincident: false,
            }),
        }
    }
    poles
}

/// Bisect the unique root of the residual inside the open interval
/// `(lo, hi)` between consecutive poles. The endpoints are never
/// evaluated; the residual is strictly decreasing from +inf to -inf, so
/// the sign at the midpoint decides the half to keep.
fn bisect_interval(cavity: &CavityGeometry, lo: f64, hi: f64) -> f64 {
    let mut lo = lo;
    let mut hi = hi;
    for _ in 0..300 {
        let mut mid = 0.5 * (lo + hi);
        let r = match mode_residual(cavity, mid) {
            Ok(r) => r,
            Err(_) => {
                // midpoint landed on a pole of a third family member;
                // nudge and re-evaluate
                mid += (hi - lo) * 1e-3;
                match mode_residual(cavity, mid) {
                    Ok(r) => r,
                    Err(_) => break,
                }
            }
        };
        if r > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= ROOT_REL_TOL * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Solve for the lowest `m` interacting frequencies.
///
/// Poles are enumerated up to a bound above `w_m^0`, each inter-pole
/// interval is bisected for its single coupled root, and coincident
/// poles contribute decoupled modes pinned exactly to the bare
/// frequency. If the bound proves too low it is raised and the
/// enumeration retried.
pub fn solve_frequencies(cavity: &CavityGeometry, m: usize) -> Result<InteractingModeSet> {
    cavity.validate()?;
    assert!(m >= 1, "at least one mode must be requested");
    let d = cavity.emitter_position;
    let e = cavity.length - d;
    let mut margin = (PI / d).max(PI / e) + 1.0;

    for _attempt in 0..4 {
        let bound = cavity.bare_omega(m - 1) + margin;
        let poles = enumerate_poles(cavity, bound);
        let mut modes: Vec<InteractingMode> = Vec::with_capacity(m);
        let mut lo = 0.0;
        for pole in &poles {
            if modes.len() >= m {
                break;
            }
            let bare = cavity.bare_omega(modes.len());
            let omega = if cavity.coupling == 0.0 {
                bare
            } else {
                bisect_interval(cavity, lo, pole.omega)
            };
            modes.push(make_coupled_mode(cavity, omega, bare)?);
            if pole.coincident && modes.len() < m {
                let bare = cavity.bare_omega(modes.len());
                debug_assert!((pole.omega - bare).abs() <= 1e-9 * bare);
                modes.push(InteractingMode {
                    omega: bare,
                    bare_omega: bare,
                    decoupled: true,
                    norm: (2.0 / cavity.length).sqrt(),
                    sin_at_emitter: 0.0,
                    sin_far_side: 0.0,
                });
            }
            lo = pole.omega;
        }
        if modes.len() == m {
            return Ok(InteractingModeSet {
                cavity: *cavity,
                modes,
            });
        }
        if _attempt == 3 {
            return Err(VarQedError::RootEnumeration {
                found: modes.len(),
                needed: m,
                bound,
            });
        }
        margin *= 3.0;
    }
    unreachable!()
}

/// Assemble a coupled mode: exact closed-form normalization of the
/// piecewise-sine profile,
/// `I = (1/2w) [ (a - sin a cos a) + (sin^2 a / sin^2 b)(b - sin b cos b) ]`
/// with `a = w d`, `b = w (L-d)`, so that `int_0^L F^2 dz = 1` to
/// machine precision for every emitter position.
fn make_coupled_mode(cavity: &CavityGeometry, omega: f64, bare: f64) -> Result<InteractingMode> {
    let a = omega * cavity.emitter_position;
    let b = omega * (cavity.length - cavity.emitter_position);
    let (sin_a, cos_a) = a.sin_cos();
    let (sin_b, cos_b) = b.sin_cos();
    if sin_b.abs() < POLE_SIN_TOL {
        return Err(VarQedError::DegenerateGeometry(sin_b));
    }
    let ratio2 = (sin_a / sin_b) * (sin_a / sin_b);
    let integral = 0.5 / omega * ((a - sin_a * cos_a) + ratio2 * (b - sin_b * cos_b));
    Ok(InteractingMode {
        omega,
        bare_omega: bare,
        decoupled: false,
        norm: 1.0 / integral.sqrt(),
        sin_at_emitter: sin_a,
        sin_far_side: sin_b,
    })
}

impl InteractingModeSet {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[InteractingMode] {
        &self.modes
    }

    pub fn omega(&self, i: usize) -> f64 {
        self.modes[i].omega
    }

    pub fn bare_omega(&self, i: usize) -> f64 {
        self.modes[i].bare_omega
    }

    pub fn is_decoupled(&self, i: usize) -> bool {
        self.modes[i].decoupled
    }

    /// Profile amplitude at the emitter; exactly zero for decoupled
    /// modes, which keeps their contributions out of every mode sum.
    pub fn amplitude_at_emitter(&self, i: usize) -> f64 {
        let mode = &self.modes[i];
        if mode.decoupled {
            0.0
        } else {
            mode.norm * mode.sin_at_emitter
        }
    }

    /// Evaluate the interacting profile `F_i(z)`.
    ///
    /// Continuous at `z = d` with the derivative jump
    /// `F'(d+) - F'(d-) = lambda F(d)`; decoupled modes return the bare
    /// profile.
    pub fn profile(&self, i: usize, z: f64) -> Result<f64> {
        let mode = &self.modes[i];
        let cavity = &self.cavity;
        debug_assert!((0.0..=cavity.length).contains(&z));
        if mode.decoupled {
            return Ok(mode.norm * (mode.omega * z).sin());
        }
        if mode.sin_far_side.abs() < POLE_SIN_TOL {
            return Err(VarQedError::DegenerateGeometry(mode.sin_far_side));
        }
        let value = if z <= cavity.emitter_position {
            mode.norm * (mode.omega * z).sin()
        } else {
            mode.norm * mode.sin_at_emitter * (mode.omega * (cavity.length - z)).sin()
                / mode.sin_far_side
        };
        Ok(value)
    }

    /// Max |G - I| entry of the profile Gram matrix under composite
    /// Gauss-Legendre quadrature split at the emitter, with panel counts
    /// doubled until the deviation stabilizes to 1e-10.
    pub fn verify_orthonormality(&self) -> f64 {
        let mut scale = 1usize;
        let mut prev = self.gram_deviation(scale);
        for _ in 0..3 {
            scale *= 2;
            let next = self.gram_deviation(scale);
            if (next - prev).abs() < 1e-10 {
                return next;
            }
            prev = next;
        }
        prev
    }

    fn gram_deviation(&self, panel_scale: usize) -> f64 {
        let gl = GaussLegendre::new(64);
        let m = self.len();
        let d = self.cavity.emitter_position;
        let l = self.cavity.length;
        let omega_max = self.modes.last().map(|md| md.omega).unwrap_or(1.0);
        // one panel per half-wavelength of the stiffest mode, per side
        let panels_left = ((d * omega_max / PI).ceil() as usize + 1) * panel_scale;
        let panels_right = (((l - d) * omega_max / PI).ceil() as usize + 1) * panel_scale;
        let mut dev = 0.0_f64;
        for i in 0..m {
            for j in i..m {
                let f = |z: f64| self.profile(i, z).unwrap() * self.profile(j, z).unwrap();
                let g = gl.integrate_composite(0.0, d, panels_left, &f)
                    + gl.integrate_composite(d, l, panels_right, &f);
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((g - target).abs());
            }
        }
        dev
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cavity(l: f64, d: f64, lam: f64) -> CavityGeometry {
        CavityGeometry::with_coupling(l, d, lam).unwrap()
    }

    #[test]
    fn bare_mode_basics() {
        let c = cavity(PI, 1.0, 0.0);
        assert!((c.bare_omega(0) - 1.0).abs() < 1e-15);
        // normalization of the bare profile
        let gl = GaussLegendre::new(32);
        for i in 0..3 {
            let int = gl.integrate_composite(0.0, PI, 8, &|z| c.bare_profile(i, z).powi(2));
            assert!((int - 1.0).abs() < 1e-12);
        }
        // node at the midpoint for the second mode
        let c2 = cavity(PI, PI / 2.0, 0.0);
        assert!(c2.bare_profile(1, c2.emitter_position).abs() < 1e-14);
    }

    #[test]
    fn residual_zero_at_bare_when_uncoupled() {
        let c = cavity(PI, 1.0, 0.0);
        for i in 0..5 {
            let r = mode_residual(&c, c.bare_omega(i)).unwrap();
            assert!(r.abs() < 1e-10, "n={} r={r}", i + 1);
        }
    }

    #[test]
    fn residual_signals_pole() {
        let c = cavity(PI, PI / 2.0, 1.0);
        // omega = 2 pi c / L sits exactly on the coincident pole
        assert!(matches!(
            mode_residual(&c, 2.0),
            Err(VarQedError::AtPole { .. })
        ));
    }

    #[test]
    fn solve_uncoupled_is_bare() {
        let c = cavity(PI, 1.1, 0.0);
        let set = solve_frequencies(&c, 10).unwrap();
        for i in 0..10 {
            assert_eq!(set.omega(i), c.bare_omega(i));
        }
    }

    #[test]
    fn solved_roots_satisfy_residual_and_bracketing() {
        let c = cavity(PI, 1.0, 1.0);
        let set = solve_frequencies(&c, 8).unwrap();
        for i in 0..8 {
            let w = set.omega(i);
            let r = mode_residual(&c, w).unwrap();
            assert!(r.abs() <= 1e-9, "mode {i}: residual {r}");
            assert!(w > set.bare_omega(i), "mode {i} must blue-shift");
        }
        // strictly increasing
        for i in 1..8 {
            assert!(set.omega(i) > set.omega(i - 1));
        }
    }

    #[test]
    fn strong_coupling_approaches_poles() {
        let c = cavity(PI, 1.0, 1e8);
        let set = solve_frequencies(&c, 6).unwrap();
        let bound = set.omega(5) + 10.0;
        let poles = enumerate_poles(&c, bound);
        for i in 0..6 {
            let w = set.omega(i);
            let pole_above = poles.iter().map(|p| p.omega).find(|&p| p >= w).unwrap();
            assert!(pole_above - w < 1e-6 * pole_above, "mode {i} far from pole");
        }
    }

    #[test]
    fn centered_emitter_decouples_even_modes() {
        let c = cavity(PI, PI / 2.0, 2.5);
        let set = solve_frequencies(&c, 10).unwrap();
        for i in 0..10 {
            if i % 2 == 1 {
                assert!(set.is_decoupled(i), "mode {i} should be decoupled");
                assert_eq!(set.omega(i), set.bare_omega(i));
                assert_eq!(set.amplitude_at_emitter(i), 0.0);
            } else {
                assert!(!set.is_decoupled(i));
                assert!(set.omega(i) > set.bare_omega(i));
            }
        }
    }

    #[test]
    fn profile_reduces_to_bare_when_uncoupled() {
        let c = cavity(PI, 1.3, 0.0);
        let set = solve_frequencies(&c, 4).unwrap();
        for i in 0..4 {
            for k in 0..=20 {
                let z = c.length * k as f64 / 20.0;
                let diff = (set.profile(i, z).unwrap() - c.bare_profile(i, z)).abs();
                assert!(diff < 1e-10, "mode {i} z={z} diff={diff}");
            }
        }
    }

    #[test]
    fn profile_continuity_and_boundaries() {
        let c = cavity(PI, 0.9, 4.0);
        let set = solve_frequencies(&c, 6).unwrap();
        let d = c.emitter_position;
        for i in 0..6 {
            let eps = 1e-9;
            let below = set.profile(i, d - eps).unwrap();
            let above = set.profile(i, d + eps).unwrap();
            let scale = set.amplitude_at_emitter(i).abs().max(set.modes[i].norm);
            assert!((below - above).abs() < 1e-6 * scale);
            assert!(set.profile(i, 0.0).unwrap().abs() < 1e-14 * scale);
            assert!(set.profile(i, c.length).unwrap().abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn derivative_jump_matches_coupling() {
        // second-order one-sided differences across the kink
        let c = cavity(PI, 1.0, 5.0);
        let set = solve_frequencies(&c, 5).unwrap();
        let d = c.emitter_position;
        let eps = 1e-7;
        for i in 0..5 {
            let f = |z: f64| set.profile(i, z).unwrap();
            let fd = f(d);
            let d_plus = (-3.0 * fd + 4.0 * f(d + eps) - f(d + 2.0 * eps)) / (2.0 * eps);
            let d_minus = (3.0 * fd - 4.0 * f(d - eps) + f(d - 2.0 * eps)) / (2.0 * eps);
            let ratio = (d_plus - d_minus) / fd;
            assert!(
                (ratio - c.coupling).abs() < 1e-6 * c.coupling,
                "mode {i}: jump ratio {ratio}"
            );
        }
    }

    #[test]
    fn orthonormality_bare_and_coupled() {
        let c0 = cavity(PI, 1.0, 0.0);
        let set0 = solve_frequencies(&c0, 8).unwrap();
        assert!(set0.verify_orthonormality() <= 1e-10);

        let c = cavity(PI, 1.0, 5.0);
        let set = solve_frequencies(&c, 20).unwrap();
        assert!(set.verify_orthonormality() <= 1e-8);
    }

    #[test]
    fn single_mode_normalization() {
        // independent check of the closed-form normalization against
        // direct quadrature of the squared profile
        let c = cavity(2.7, 0.8, 3.3);
        let set = solve_frequencies(&c, 1).unwrap();
        let gl = GaussLegendre::new(64);
        let f2 = |z: f64| set.profile(0, z).unwrap().powi(2);
        let int = gl.integrate_composite(0.0, c.emitter_position, 8, &f2)
            + gl.integrate_composite(c.emitter_position, c.length, 8, &f2);
        assert!((int - 1.0).abs() <= 1e-8, "int F^2 = {int}");
    }

    #[test]
    fn first_order_shift_slope() {
        // d(omega_n)/d(lambda) at lambda -> 0 equals sin^2(n pi d / L) / (L w_n^0)
        let l = PI;
        let d = 1.0;
        let lam = 1e-4; // 1e-4 * w1^3 scale with w1 = 1
        let set = solve_frequencies(&cavity(l, d, lam), 5).unwrap();
        for i in 0..5 {
            let w0 = set.bare_omega(i);
            let slope_fd = (set.omega(i) - w0) / lam;
            let s = ((i + 1) as f64 * PI * d / l).sin();
            let predicted = s * s / (l * w0);
            assert!(
                (slope_fd - predicted).abs() <= 0.01 * predicted.abs(),
                "mode {i}: fd {slope_fd} vs {predicted}"
            );
        }
    }

    #[test]
    fn omega_monotone_in_coupling() {
        let lams = [0.0, 0.3, 1.0, 3.0, 10.0];
        let mut prev: Option<Vec<f64>> = None;
        for &lam in &lams {
            let set = solve_frequencies(&cavity(PI, 1.2, lam), 6).unwrap();
            let ws: Vec<f64> = (0..6).map(|i| set.omega(i)).collect();
            if let Some(p) = prev {
                for i in 0..6 {
                    assert!(ws[i] >= p[i], "mode {i} not monotone");
                }
            }
            prev = Some(ws);
        }
    }

    #[test]
    fn completeness_proxy_tail_decay() {
        // sum F_n(d)^2 / w_n^2 converges with a 1/M tail
        let c = cavity(PI, 1.0, 2.0);
        let set = solve_frequencies(&c, 160).unwrap();
        let partial = |m: usize| -> f64 {
            (0..m)
                .map(|i| {
                    let f = set.amplitude_at_emitter(i);
                    f * f / (set.omega(i) * set.omega(i))
                })
                .sum()
        };
        let tail_40 = partial(160) - partial(40);
        let tail_80 = partial(160) - partial(80);
        // 1/M decay: tail(40) / tail(80) ~ 2 up to the finite upper cutoff
        let ratio = tail_40 / tail_80;
        assert!(ratio > 1.5 && ratio < 3.5, "tail ratio {ratio}");
    }

    #[test]
    fn geometry_validation() {
        assert!(CavityGeometry::with_coupling(0.0, 0.5, 1.0).is_err());
        assert!(CavityGeometry::with_coupling(1.0, 1.5, 1.0).is_err());
        assert!(CavityGeometry::with_coupling(1.0, 0.5, -1.0).is_err());
    }
}
