//! Validate the variational energies against exact diagonalization at
//! matched truncation (16 modes, 3 photons): the quasiparticle energy
//! upper-bounds the true ground state, and adding the correlation term
//! lands within a fraction of a percent of the level spacing.
//!
//! ```bash
//! cargo run --release -p varqed --example oracle_check
//! ```

use varqed::energies::spectrum;
use varqed::modes::solve_frequencies;
use varqed::oracle::FockHamiltonian;
use varqed::scenario::load_config;

fn main() {
    let scenario = load_config(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../scenarios/four_level.json"
    ))
    .unwrap();
    let eig = &scenario.eigensystem;
    let settings = scenario.oracle.unwrap();

    for scale in [0.5, 1.0] {
        let cavity = scenario.cavity_at(scale).unwrap();
        let set = solve_frequencies(&cavity, scenario.n_modes).unwrap();
        let levels = spectrum(eig, &set, 5).unwrap();

        let h = FockHamiltonian::new(eig, &cavity, settings.n_modes, settings.truncation, None)
            .unwrap();
        println!(
            "charge scale {scale}: lambda = {:.4} eV, Fock basis {} states",
            cavity.coupling,
            h.dim()
        );
        let oracle = h
            .lowest_eigenvalues(5, settings.tolerance, scenario.seed)
            .unwrap();

        let bound = levels[0].total_without_correlation();
        println!(
            "  upper bound check: quasiparticle ground {bound:+.6} >= oracle {:+.6}  (margin {:+.2e})",
            oracle[0],
            bound - oracle[0]
        );
        println!(
            "  {:<10} {:>14} {:>14} {:>12}",
            "state", "variational", "oracle", "diff (meV)"
        );
        for (level, &exact) in levels.iter().zip(oracle.iter()) {
            println!(
                "  {:<10} {:>14.6} {:>14.6} {:>12.3}",
                level.label(),
                level.total,
                exact,
                1e3 * (level.total - exact)
            );
        }
        println!();
    }
}
