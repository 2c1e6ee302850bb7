//! Command-line front end: scenario solves, sweeps, convergence studies,
//! standalone diagonalization, and mode dumps. All heavy lifting lives
//! in the library; this binary parses arguments, wires configuration
//! overrides, and writes reports.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use varqed::error::Result;
use varqed::fock::Truncation;
use varqed::modes::solve_frequencies;
use varqed::oracle::FockHamiltonian;
use varqed::report::{convergence_csv, emit_report, format_number, modes_csv};
use varqed::scenario::{load_config, OutputFormat, Scenario, SweepParameter};
use varqed::sweep::{convergence_study, run_sweep, PointOutcome};
use varqed::units::length_to_nm;

#[derive(Parser)]
#[command(
    name = "varqed",
    version,
    about = "Variational quasiparticle energies of a multilevel emitter in a 1D cavity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a single point (charge scale 1 or the configured geometry).
    Solve(Common),
    /// Run the configured parameter sweep and write comparison reports.
    Sweep(Common),
    /// Convergence study: energy terms versus mode cutoff and photon cap.
    Converge(Common),
    /// Standalone exact diagonalization at the single-point settings.
    Oracle(Common),
    /// Dump interacting frequencies and sampled mode profiles.
    Modes(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario configuration file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format (overrides the config).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Force-enable the exact-diagonalization oracle.
    #[arg(long)]
    oracle: bool,
    /// Seed override for the oracle start vector.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (RAYON_NUM_THREADS also applies).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Both,
}

impl Common {
    fn load(&self) -> Result<(Scenario, PathBuf, Vec<OutputFormat>)> {
        if let Some(n) = self.threads {
            // a second build_global is harmless: the first pool wins
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        let mut scenario = load_config(&self.config)?;
        if self.oracle && scenario.oracle.is_none() {
            let mut config = scenario.config.clone();
            config.oracle.enabled = true;
            scenario = config.resolve()?;
        }
        if let Some(seed) = self.seed {
            scenario.seed = seed;
            scenario.config.seed = seed;
        }
        let out = self
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from(&scenario.config.output.directory));
        let formats = match self.format {
            Some(FormatArg::Csv) => vec![OutputFormat::Csv],
            Some(FormatArg::Json) => vec![OutputFormat::Json],
            Some(FormatArg::Both) => vec![OutputFormat::Csv, OutputFormat::Json],
            None => scenario.config.output.formats.clone(),
        };
        Ok((scenario, out, formats))
    }
}

/// The sweep value a single-point command runs at: full charge for a
/// charge sweep, otherwise the configured base geometry.
fn single_point_value(scenario: &Scenario) -> f64 {
    match scenario.config.sweep.parameter {
        SweepParameter::ChargeScale => 1.0,
        SweepParameter::EmitterPosition => length_to_nm(scenario.base_cavity.emitter_position),
        SweepParameter::CavityLength => length_to_nm(scenario.base_cavity.length),
    }
}

fn cmd_solve(common: &Common) -> Result<()> {
    let (mut scenario, out, formats) = common.load()?;
    scenario.sweep_values = vec![single_point_value(&scenario)];
    let report = run_sweep(&scenario);
    match &report.points[0].outcome {
        PointOutcome::Ok(data) => {
            println!(
                "lambda = {} eV   omega_1 = {} eV (bare {})   F1(d)/F1_0(d) = {}",
                format_number(report.points[0].lambda),
                format_number(data.omega1),
                format_number(data.omega1_bare),
                format_number(data.mode_suppression),
            );
            println!(
                "{:<12} {:>18} {:>18} {:>18}",
                "level", "variational_ev", "bare_pt_ev", "oracle_ev"
            );
            for i in 0..data.variational.len() {
                let var = &data.variational[i];
                let pt = data.perturbation.get(i);
                let orc = data.oracle.as_ref().and_then(|o| o.energies.get(i));
                println!(
                    "{:<12} {:>18} {:>18} {:>18}",
                    var.label(),
                    format_number(var.total),
                    pt.map(|p| format_number(p.total)).unwrap_or_default(),
                    orc.map(|&e| format_number(e)).unwrap_or_default(),
                );
            }
        }
        PointOutcome::Failed { error } => println!("point failed: {error}"),
    }
    let written = emit_report(&report, &out, &formats)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_sweep(common: &Common) -> Result<()> {
    let (scenario, out, formats) = common.load()?;
    let report = run_sweep(&scenario);
    let n_ok = report
        .points
        .iter()
        .filter(|p| matches!(p.outcome, PointOutcome::Ok(_)))
        .count();
    println!(
        "{}: {} points, {} ok, {} failed",
        report.sweep_parameter,
        report.points.len(),
        n_ok,
        report.points.len() - n_ok
    );
    let written = emit_report(&report, &out, &formats)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    if n_ok < report.points.len() {
        for p in &report.points {
            if let PointOutcome::Failed { error } = &p.outcome {
                eprintln!("point {} failed: {error}", format_number(p.value));
            }
        }
    }
    Ok(())
}

fn cmd_converge(common: &Common) -> Result<()> {
    let (scenario, out, _) = common.load()?;
    let study = convergence_study(&scenario)?;
    print!("{}", convergence_csv(&study));
    std::fs::create_dir_all(&out)?;
    let path = out.join("converge.csv");
    std::fs::write(&path, convergence_csv(&study))?;
    let json_path = out.join("converge.json");
    serde_json::to_writer_pretty(std::fs::File::create(&json_path)?, &study)
        .map_err(varqed::error::VarQedError::from)?;
    println!("wrote {}", path.display());
    println!("wrote {}", json_path.display());
    Ok(())
}

fn cmd_oracle(common: &Common) -> Result<()> {
    let (scenario, out, _) = common.load()?;
    let value = single_point_value(&scenario);
    let cavity = scenario.cavity_at(value)?;
    let settings = scenario.oracle.unwrap_or(varqed::scenario::OracleSettings {
        n_modes: scenario.n_modes,
        truncation: Truncation::TotalPhotons(3),
        tolerance: 1e-10,
        state_budget: None,
    });
    let h = FockHamiltonian::new(
        &scenario.eigensystem,
        &cavity,
        settings.n_modes,
        settings.truncation,
        settings.state_budget,
    )?;
    println!(
        "basis: {} states ({} modes, cap {})",
        h.dim(),
        settings.n_modes,
        settings.truncation.cap()
    );
    let energies = h.lowest_eigenvalues(scenario.levels, settings.tolerance, scenario.seed)?;
    let zero_point = h.zero_point_convention();
    println!(
        "zero-point convention: E_abs = E + {} eV",
        format_number(zero_point)
    );
    for (i, &e) in energies.iter().enumerate() {
        println!(
            "#{i}: {} eV (abs {})",
            format_number(e),
            format_number(e + zero_point)
        );
    }
    std::fs::create_dir_all(&out)?;
    let path = out.join("oracle.json");
    let doc = serde_json::json!({
        "n_modes": settings.n_modes,
        "max_photons": settings.truncation.cap(),
        "zero_point_ev": zero_point,
        "energies_ev": energies,
        "seed": scenario.seed,
    });
    serde_json::to_writer_pretty(std::fs::File::create(&path)?, &doc)
        .map_err(varqed::error::VarQedError::from)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_modes(common: &Common) -> Result<()> {
    let (scenario, out, _) = common.load()?;
    let value = single_point_value(&scenario);
    let cavity = scenario.cavity_at(value)?;
    let set = solve_frequencies(&cavity, scenario.n_modes)?;
    for i in 0..set.len().min(10) {
        println!(
            "mode {:>3}: omega = {} eV (bare {}){}",
            i + 1,
            format_number(set.omega(i)),
            format_number(set.bare_omega(i)),
            if set.is_decoupled(i) {
                "  [decoupled]"
            } else {
                ""
            }
        );
    }
    let (table, profiles) = modes_csv(&set)?;
    std::fs::create_dir_all(&out)?;
    let t_path = out.join("modes.csv");
    let p_path = out.join("profiles.csv");
    std::fs::write(&t_path, table)?;
    std::fs::write(&p_path, profiles)?;
    println!("wrote {}", t_path.display());
    println!("wrote {}", p_path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(c) => cmd_solve(c),
        Command::Sweep(c) => cmd_sweep(c),
        Command::Converge(c) => cmd_converge(c),
        Command::Oracle(c) => cmd_oracle(c),
        Command::Modes(c) => cmd_modes(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let summary = serde_json::json!({ "error": e.to_string() });
            eprintln!("{summary}");
            ExitCode::FAILURE
        }
    }
}
