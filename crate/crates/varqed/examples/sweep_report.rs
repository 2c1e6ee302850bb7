//! Run a full charge sweep from a scenario file and write the CSV/JSON
//! comparison reports, the same artifacts the `varqed sweep` command
//! produces.
//!
//! ```bash
//! cargo run --release -p varqed --example sweep_report
//! ```

use std::path::Path;

use varqed::report::emit_report;
use varqed::scenario::{load_config, OutputFormat};
use varqed::sweep::{run_sweep, PointOutcome};

fn main() {
    let scenario = load_config(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../scenarios/three_level.json"
    ))
    .unwrap();

    let report = run_sweep(&scenario);
    println!(
        "{} sweep over {} points (seed {})",
        report.sweep_parameter,
        report.points.len(),
        report.seed
    );
    println!(
        "{:>8} {:>10} {:>12} {:>12} {:>12} {:>12}",
        "value", "lambda", "omega_1", "suppression", "E_var[0]", "E_oracle[0]"
    );
    for point in &report.points {
        match &point.outcome {
            PointOutcome::Ok(data) => println!(
                "{:>8.3} {:>10.4} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                point.value,
                point.lambda,
                data.omega1,
                data.mode_suppression,
                data.variational[0].total,
                data.oracle
                    .as_ref()
                    .map(|o| o.energies[0])
                    .unwrap_or(f64::NAN),
            ),
            PointOutcome::Failed { error } => {
                println!("{:>8.3}  FAILED: {error}", point.value)
            }
        }
    }

    let out = Path::new("out/example_sweep");
    let written = emit_report(&report, out, &[OutputFormat::Csv, OutputFormat::Json]).unwrap();
    for path in written {
        println!("wrote {}", path.display());
    }
}
