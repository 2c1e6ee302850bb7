//! Machine-readable report emission.
//!
//! CSV: one row per sweep point, state, and method, with a fixed
//! 20-column schema (header carries units). Numbers are printed with 12
//! significant digits in scientific notation, rows follow sweep order,
//! and timings are deliberately absent, so identical configs and seeds
//! produce byte-identical files. JSON carries the full nested report,
//! including timings; re-reading it reproduces every total bit for bit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::modes::InteractingModeSet;
use crate::scenario::OutputFormat;
use crate::sweep::{ComparisonReport, ConvergenceStudy, PointOutcome};
use crate::units::length_to_nm;

/// CSV schema, in order. `energy_ev` is measured from the bare vacuum
/// (the zero shared by variational totals and Fock eigenvalues);
/// `energy_abs_ev` adds the method's own zero-point constant. Rows never
/// mix truncations: each carries its method's `n_modes` and
/// `photon_cap`.
pub const CSV_COLUMNS: [&str; 20] = [
    "sweep_parameter",
    "sweep_value",
    "lambda_ev",
    "status",
    "method",
    "n_modes",
    "photon_cap",
    "level_index",
    "state_label",
    "energy_ev",
    "energy_abs_ev",
    "bare_matter_ev",
    "casimir_ev",
    "photon_term_ev",
    "correlation_ev",
    "cutoff_sensitivity_ev",
    "omega1_ev",
    "omega1_bare_ev",
    "mode_suppression",
    "error",
];

/// 12 significant digits, scientific; the report's number format.
pub fn format_number(x: f64) -> String {
    format!("{x:.11e}")
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Render the comparison report as CSV text.
pub fn comparison_csv(report: &ComparisonReport) -> String {
    let mut out = String::new();
    out.push_str(&CSV_COLUMNS.join(","));
    out.push('\n');
    for point in &report.points {
        let prefix = |status: &str| {
            format!(
                "{},{},{},{}",
                report.sweep_parameter,
                format_number(point.value),
                format_number(point.lambda),
                status
            )
        };
        match &point.outcome {
            PointOutcome::Failed { error } => {
                out.push_str(&prefix("failed"));
                // method..mode_suppression stay empty
                out.push_str(&",".repeat(15));
                out.push(',');
                out.push_str(&csv_quote(error));
                out.push('\n');
            }
            PointOutcome::Ok(data) => {
                let tail = format!(
                    "{},{},{}",
                    format_number(data.omega1),
                    format_number(data.omega1_bare),
                    format_number(data.mode_suppression)
                );
                for (idx, level) in data.variational.iter().enumerate() {
                    out.push_str(&format!(
                        "{},variational,{},,{},{},{},{},{},{},{},{},{},{},\n",
                        prefix("ok"),
                        level.mode_cutoff,
                        idx,
                        level.label(),
                        format_number(level.total),
                        format_number(level.total + data.zero_point_variational),
                        format_number(level.bare_matter_energy),
                        format_number(level.casimir_term),
                        format_number(level.photon_quasiparticle_term),
                        format_number(level.correlation_term),
                        format_number(level.cutoff_sensitivity),
                        tail
                    ));
                }
                for (idx, level) in data.perturbation.iter().enumerate() {
                    out.push_str(&format!(
                        "{},bare_pt,{},,{},{},{},{},{},,{},,,{},\n",
                        prefix("ok"),
                        level.n_modes,
                        idx,
                        level.label(),
                        format_number(level.total),
                        format_number(level.total + data.zero_point_variational),
                        format_number(level.bare_matter_energy),
                        format_number(level.photon_term),
                        tail
                    ));
                }
                if let Some(oracle) = &data.oracle {
                    for (idx, &energy) in oracle.energies.iter().enumerate() {
                        out.push_str(&format!(
                            "{},oracle,{},{},{},#{},{},{},,,,,,{},\n",
                            prefix("ok"),
                            oracle.n_modes,
                            oracle.max_photons,
                            idx,
                            idx,
                            format_number(energy),
                            format_number(energy + oracle.zero_point),
                            tail
                        ));
                    }
                }
            }
        }
    }
    out
}

/// Render a convergence study as CSV text (two sections share one
/// header).
pub fn convergence_csv(study: &ConvergenceStudy) -> String {
    let mut out = String::new();
    out.push_str(
        "section,sweep_value,lambda_ev,n_modes,photon_cap,casimir_ev,\
         casimir_tail_ev,correlation_ground_ev,variational_ground_ev,oracle_ground_ev\n",
    );
    for row in &study.mode_rows {
        out.push_str(&format!(
            "modes,{},{},{},,{},{},{},{},\n",
            format_number(study.sweep_value),
            format_number(study.lambda),
            row.n_modes,
            format_number(row.casimir),
            format_number(row.casimir_tail_next_octave),
            format_number(row.correlation_ground),
            format_number(row.variational_ground_total),
        ));
    }
    for row in &study.oracle_rows {
        out.push_str(&format!(
            "oracle,{},{},{},{},,,,,{}\n",
            format_number(study.sweep_value),
            format_number(study.lambda),
            row.n_modes,
            row.max_photons,
            format_number(row.ground_energy),
        ));
    }
    out
}

/// Mode table and sampled profiles for plotting: 512 evenly spaced
/// points plus an extra pair straddling the emitter to expose the
/// derivative kink.
pub fn modes_csv(set: &InteractingModeSet) -> Result<(String, String)> {
    let mut table = String::from("mode,omega_ev,omega_bare_ev,decoupled,amplitude_at_emitter\n");
    for i in 0..set.len() {
        table.push_str(&format!(
            "{},{},{},{},{}\n",
            i + 1,
            format_number(set.omega(i)),
            format_number(set.bare_omega(i)),
            set.is_decoupled(i),
            format_number(set.amplitude_at_emitter(i)),
        ));
    }

    let l = set.cavity.length;
    let d = set.cavity.emitter_position;
    let eps = 1e-9 * l;
    let mut zs: Vec<f64> = (0..512).map(|k| l * k as f64 / 511.0).collect();
    zs.push(d - eps);
    zs.push(d + eps);
    zs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut profiles = String::from("mode,z_nm,amplitude\n");
    for i in 0..set.len() {
        for &z in &zs {
            profiles.push_str(&format!(
                "{},{},{}\n",
                i + 1,
                format_number(length_to_nm(z)),
                format_number(set.profile(i, z)?),
            ));
        }
    }
    Ok((table, profiles))
}

/// Write the report in the requested formats; returns the paths written.
pub fn emit_report(
    report: &ComparisonReport,
    directory: &Path,
    formats: &[OutputFormat],
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(directory)?;
    let mut written = Vec::new();
    for format in formats {
        match format {
            OutputFormat::Csv => {
                let path = directory.join("report.csv");
                let mut file = fs::File::create(&path)?;
                file.write_all(comparison_csv(report).as_bytes())?;
                written.push(path);
            }
            OutputFormat::Json => {
                let path = directory.join("report.json");
                let file = fs::File::create(&path)?;
                serde_json::to_writer_pretty(file, report)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ScenarioConfig;
    use crate::sweep::run_sweep;

    fn report() -> ComparisonReport {
        let text = r#"{
            "emitter": { "n_levels": 2, "hopping": -0.35, "charge": 5.3 },
            "cavity": { "length_nm": 477.0, "area_nm2": 1.0 },
            "sweep": { "parameter": "charge_scale", "start": 0.0, "stop": 1.0, "points": 2 },
            "modes": { "count": 12 },
            "oracle": { "enabled": true, "n_modes": 12, "max_photons": 2 },
            "levels": 3,
            "seed": 5
        }"#;
        run_sweep(&ScenarioConfig::from_json(text).unwrap().resolve().unwrap())
    }

    #[test]
    fn csv_schema_fixed() {
        let csv = comparison_csv(&report());
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert_eq!(header.split(',').count(), CSV_COLUMNS.len());
        for line in lines {
            // quoted error messages never appear in a clean run
            assert_eq!(
                line.split(',').count(),
                CSV_COLUMNS.len(),
                "bad row: {line}"
            );
        }
        // 2 points x 3 levels x 3 methods + header
        assert_eq!(csv.lines().count(), 1 + 2 * 3 * 3);
    }

    #[test]
    fn empty_sweep_yields_header_only() {
        let rep = ComparisonReport {
            sweep_parameter: "charge_scale".into(),
            seed: 0,
            points: vec![],
        };
        let csv = comparison_csv(&rep);
        assert_eq!(csv.lines().count(), 1);
        assert!(csv.starts_with("sweep_parameter,"));
    }

    #[test]
    fn json_round_trips_totals_bit_for_bit() {
        let rep = report();
        let text = serde_json::to_string(&rep).unwrap();
        let back: ComparisonReport = serde_json::from_str(&text).unwrap();
        for (p, q) in rep.points.iter().zip(back.points.iter()) {
            match (&p.outcome, &q.outcome) {
                (PointOutcome::Ok(a), PointOutcome::Ok(b)) => {
                    for (x, y) in a.variational.iter().zip(b.variational.iter()) {
                        assert_eq!(x.total.to_bits(), y.total.to_bits());
                    }
                    let (oa, ob) = (a.oracle.as_ref().unwrap(), b.oracle.as_ref().unwrap());
                    for (x, y) in oa.energies.iter().zip(ob.energies.iter()) {
                        assert_eq!(x.to_bits(), y.to_bits());
                    }
                }
                _ => panic!("outcome mismatch"),
            }
        }
    }

    #[test]
    fn number_format_is_twelve_significant_digits() {
        assert_eq!(format_number(1.0), "1.00000000000e0");
        assert_eq!(format_number(-0.25), "-2.50000000000e-1");
        assert_eq!(format_number(1234.5678), "1.23456780000e3");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_quote("plain"), "plain");
        assert_eq!(csv_quote("a,b"), "\"a,b\"");
        assert_eq!(csv_quote("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn modes_dump_has_kink_samples() {
        let cavity = crate::modes::CavityGeometry::with_coupling(2.0, 0.8, 1.5).unwrap();
        let set = crate::modes::solve_frequencies(&cavity, 3).unwrap();
        let (table, profiles) = modes_csv(&set).unwrap();
        assert_eq!(table.lines().count(), 4);
        // 512 grid points + 2 kink samples per mode
        assert_eq!(profiles.lines().count(), 1 + 3 * 514);
    }
}
