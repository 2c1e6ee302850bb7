//! Lowest levels of the shipped two-level scenario at full coupling:
//! the variational quasiparticle energies against bare-mode
//! perturbation theory, which misses the blue shift and the screening
//! and lands far from the truth on photon-carrying levels.
//!
//! ```bash
//! cargo run -p varqed --example level_spectrum
//! ```

use varqed::energies::{bare_pt_energy, spectrum};
use varqed::modes::solve_frequencies;
use varqed::scenario::load_config;

fn main() {
    let scenario = load_config(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../scenarios/two_level.json"
    ))
    .unwrap();
    let eig = &scenario.eigensystem;

    let cavity = scenario.cavity_at(1.0).unwrap();
    let set = solve_frequencies(&cavity, scenario.n_modes).unwrap();
    let levels = spectrum(eig, &set, 6).unwrap();

    println!(
        "two-level emitter, lambda = {:.4} eV, omega_1 {:.4} -> {:.4} eV",
        cavity.coupling,
        set.bare_omega(0),
        set.omega(0)
    );
    println!(
        "\n{:<10} {:>14} {:>14} {:>14} {:>14} {:>12}",
        "state", "total (eV)", "casimir", "photon", "correlation", "sens (eV)"
    );
    for level in &levels {
        println!(
            "{:<10} {:>14.6} {:>14.6} {:>14.6} {:>14.6} {:>12.2e}",
            level.label(),
            level.total,
            level.casimir_term,
            level.photon_quasiparticle_term,
            level.correlation_term,
            level.cutoff_sensitivity
        );
    }

    // bare perturbation theory keeps the bare frequencies and the bare
    // profile at the emitter, so its photon levels sit near the bare
    // quanta no matter how strong the screening is
    println!("\nbare-mode perturbation theory for comparison:");
    for a in 0..eig.n_levels() {
        let pt = bare_pt_energy(eig, &cavity, scenario.n_modes, a).unwrap();
        println!("  a{a}: {pt:+.6} eV (matter level only)");
    }
    println!(
        "  one bare photon adds {:.6} eV; one quasiparticle adds {:.6} eV",
        set.bare_omega(0),
        set.omega(0)
    );
}
