//! Build a tight-binding emitter, calibrate its site length against the
//! TRK sum rule, and inspect levels and momentum matrix elements.
//!
//! ```bash
//! cargo run -p varqed --example calibrate_emitter
//! ```

use varqed::matter::{trk_sum, EmitterSpec, SiteLength};
use varqed::units::{length_to_nm, ELECTRON_MASS_EV};

fn main() {
    // four-site chain, eV units; R = "auto" enforces the sum rule
    let spec = EmitterSpec {
        n_levels: 4,
        site_potentials: vec![0.15, 0.0, 0.0, -0.1],
        hopping: -0.3,
        site_length: SiteLength::Auto,
        mass: ELECTRON_MASS_EV,
        charge: 1.0,
    };

    let eig = spec.eigensystem().unwrap();
    println!(
        "calibrated site length R = {:.6} nm",
        length_to_nm(eig.site_length)
    );
    println!(
        "reference scale sqrt(hbar/2m|t|) = {:.6} nm",
        length_to_nm((1.0 / (2.0 * spec.mass * spec.hopping.abs())).sqrt())
    );

    println!("\nlevels (eV):");
    for (a, e) in eig.energies.iter().enumerate() {
        println!("  E_{a} = {e:+.6}");
    }

    println!("\n|p_ab| in units of hbar/R:");
    let scale = 1.0 / eig.site_length;
    for a in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|b| format!("{:.4}", eig.momentum_elements[(a, b)].norm() / scale))
            .collect();
        println!("  [{}]", row.join(", "));
    }

    let s = trk_sum(&eig, spec.mass, 0).unwrap();
    println!("\nTRK sum after calibration: {s:.15} (target 1)");

    // the sum scales as 1/R^2, which is what makes calibration closed-form
    let mut doubled = spec.clone();
    doubled.site_length = SiteLength::Fixed(2.0 * eig.site_length);
    let s2 = trk_sum(&doubled.eigensystem().unwrap(), spec.mass, 0).unwrap();
    println!("TRK sum with R doubled:    {s2:.15} (expect 0.25)");
}
