//! Solve the screened-mode problem: blue-shifted interacting
//! frequencies, decoupled modes at a centered emitter, profile
//! continuity, and the derivative jump at the emitter.
//!
//! ```bash
//! cargo run -p varqed --example screened_modes
//! ```

use varqed::modes::{mode_residual, solve_frequencies, CavityGeometry};

fn main() {
    // natural units: L = pi so the bare frequencies are 1, 2, 3, ... eV
    let l = std::f64::consts::PI;
    let cavity = CavityGeometry::with_coupling(l, l / 2.0, 2.0).unwrap();
    let set = solve_frequencies(&cavity, 8).unwrap();

    println!("centered emitter, lambda = {} eV:", cavity.coupling);
    println!(
        "{:>4} {:>12} {:>12} {:>10} {:>12}",
        "mode", "bare (eV)", "omega (eV)", "shift %", "residual"
    );
    for i in 0..set.len() {
        if set.is_decoupled(i) {
            println!(
                "{:>4} {:>12.6} {:>12.6} {:>10} {:>12}",
                i + 1,
                set.bare_omega(i),
                set.omega(i),
                "0 (node)",
                "decoupled"
            );
        } else {
            let r = mode_residual(&cavity, set.omega(i)).unwrap();
            println!(
                "{:>4} {:>12.6} {:>12.6} {:>10.3} {:>12.2e}",
                i + 1,
                set.bare_omega(i),
                set.omega(i),
                100.0 * (set.omega(i) / set.bare_omega(i) - 1.0),
                r
            );
        }
    }

    // off-center emitter: check continuity and the derivative jump
    let cavity = CavityGeometry::with_coupling(l, 1.0, 5.0).unwrap();
    let set = solve_frequencies(&cavity, 4).unwrap();
    let d = cavity.emitter_position;
    let eps = 1e-7;
    println!("\noff-center emitter (d = 1), lambda = 5:");
    println!("jump condition (F'(d+) - F'(d-)) / F(d), expect lambda = 5:");
    for i in 0..4 {
        let f = |z: f64| set.profile(i, z).unwrap();
        let fd = f(d);
        let d_plus = (-3.0 * fd + 4.0 * f(d + eps) - f(d + 2.0 * eps)) / (2.0 * eps);
        let d_minus = (3.0 * fd - 4.0 * f(d - eps) + f(d - 2.0 * eps)) / (2.0 * eps);
        println!(
            "  mode {}: jump/F(d) = {:.8}, continuity gap = {:.2e}",
            i + 1,
            (d_plus - d_minus) / fd,
            (f(d + 1e-12) - f(d - 1e-12)).abs()
        );
    }

    println!(
        "\nGram-matrix orthonormality deviation over {} modes: {:.2e}",
        set.len(),
        set.verify_orthonormality()
    );
}
