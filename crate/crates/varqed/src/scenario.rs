//! Scenario configuration: JSON ingestion, validation, defaulting, and
//! conversion from laboratory units (nm, elementary charges, electron
//! masses) to the natural units used internally.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, VarQedError};
use crate::fock::Truncation;
use crate::matter::{EmitterSpec, MatterEigensystem, SiteLength};
use crate::modes::CavityGeometry;
use crate::units::{area_from_nm2, length_from_nm, ELECTRON_MASS_EV};

fn config_err(path: &str, reason: impl Into<String>) -> VarQedError {
    VarQedError::Config {
        path: path.to_string(),
        reason: reason.into(),
    }
}

/// Raw configuration document, one-to-one with the JSON schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub emitter: EmitterConfig,
    pub cavity: CavityConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub modes: ModesConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
    /// Number of levels to report per method.
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmitterConfig {
    pub n_levels: usize,
    /// On-site potentials in eV; defaults to all zeros.
    #[serde(default)]
    pub site_potentials: Option<Vec<f64>>,
    /// Hopping element in eV.
    pub hopping: f64,
    /// Site length in nm, or "auto" for TRK calibration.
    #[serde(default)]
    pub site_length_nm: SiteLengthConfig,
    /// Mass in units of the electron rest energy.
    #[serde(default = "default_mass")]
    pub mass: f64,
    /// Charge in units of the elementary charge.
    #[serde(default = "default_charge")]
    pub charge: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SiteLengthConfig {
    #[default]
    #[serde(skip)]
    Unset,
    Keyword(String),
    Nm(f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    pub length_nm: f64,
    /// Defaults to the cavity midpoint.
    #[serde(default)]
    pub emitter_position_nm: Option<f64>,
    /// Cross-section in nm^2; mutually exclusive with `lambda_ev`.
    #[serde(default)]
    pub area_nm2: Option<f64>,
    /// Coupling lambda in eV, overriding the (charge, mass, area) route.
    #[serde(default)]
    pub lambda_ev: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            parameter: SweepParameter::ChargeScale,
            start: 0.0,
            stop: 1.0,
            points: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Multiplies the emitter charge (lambda scales with its square).
    ChargeScale,
    /// Emitter position in nm.
    EmitterPosition,
    /// Cavity length in nm.
    CavityLength,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::ChargeScale => "charge_scale",
            SweepParameter::EmitterPosition => "emitter_position",
            SweepParameter::CavityLength => "cavity_length",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesConfig {
    #[serde(default = "default_mode_count")]
    pub count: usize,
}

impl Default for ModesConfig {
    fn default() -> Self {
        Self {
            count: default_mode_count(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default)]
    pub enabled: bool,
    /// Defaults to the variational mode count.
    #[serde(default)]
    pub n_modes: Option<usize>,
    #[serde(default = "default_max_photons")]
    pub max_photons: usize,
    #[serde(default = "default_oracle_tol")]
    pub tolerance: f64,
    #[serde(default)]
    pub truncation: TruncationConfig,
    /// Ceiling on enumerated Fock states.
    #[serde(default)]
    pub state_budget: Option<usize>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            n_modes: None,
            max_photons: default_max_photons(),
            tolerance: default_oracle_tol(),
            truncation: TruncationConfig::Total,
            state_budget: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationConfig {
    /// Cap on the total photon number (the reported default).
    #[default]
    Total,
    /// Cap on each mode separately.
    PerMode,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub directory: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: default_out_dir(),
            formats: default_formats(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

fn default_levels() -> usize {
    5
}
fn default_mass() -> f64 {
    1.0
}
fn default_charge() -> f64 {
    1.0
}
fn default_mode_count() -> usize {
    50
}
fn default_max_photons() -> usize {
    3
}
fn default_oracle_tol() -> f64 {
    1e-10
}
fn default_out_dir() -> String {
    "out".to_string()
}
fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json]
}

/// Fully resolved scenario in natural units, ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub emitter: EmitterSpec,
    pub eigensystem: MatterEigensystem,
    /// Geometry at charge scale one.
    pub base_cavity: CavityGeometry,
    pub sweep_values: Vec<f64>,
    pub n_modes: usize,
    pub oracle: Option<OracleSettings>,
    pub levels: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct OracleSettings {
    pub n_modes: usize,
    pub truncation: Truncation,
    pub tolerance: f64,
    pub state_budget: Option<usize>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| config_err("<document>", format!("parse error: {e}")))
    }

    /// Validate, apply defaults, convert units, and calibrate the
    /// emitter. The sum-rule calibration of R happens once here: the
    /// charge sweep is a sum-rule-independent knob and leaves R fixed.
    pub fn resolve(self) -> Result<Scenario> {
        let e = &self.emitter;
        let site_length = match &e.site_length_nm {
            SiteLengthConfig::Unset => SiteLength::Auto,
            SiteLengthConfig::Keyword(k) if k == "auto" => SiteLength::Auto,
            SiteLengthConfig::Keyword(k) => {
                return Err(config_err(
                    "emitter.site_length_nm",
                    format!("expected a number or \"auto\", got \"{k}\""),
                ));
            }
            SiteLengthConfig::Nm(nm) => {
                if !(*nm > 0.0) {
                    return Err(config_err("emitter.site_length_nm", "must be positive"));
                }
                SiteLength::Fixed(length_from_nm(*nm))
            }
        };
        let site_potentials = match &e.site_potentials {
            Some(v) => {
                if v.len() != e.n_levels {
                    return Err(config_err(
                        "emitter.site_potentials",
                        format!("length {} does not match n_levels {}", v.len(), e.n_levels),
                    ));
                }
                v.clone()
            }
            None => vec![0.0; e.n_levels],
        };
        if !(e.mass > 0.0) {
            return Err(config_err("emitter.mass", "must be positive"));
        }
        let emitter = EmitterSpec {
            n_levels: e.n_levels,
            site_potentials,
            hopping: e.hopping,
            site_length,
            mass: e.mass * ELECTRON_MASS_EV,
            charge: e.charge,
        };
        emitter
            .validate()
            .map_err(|err| config_err("emitter", err.to_string()))?;
        let eigensystem = emitter.eigensystem()?;

        let c = &self.cavity;
        if !(c.length_nm > 0.0) {
            return Err(config_err("cavity.length_nm", "must be positive"));
        }
        let length = length_from_nm(c.length_nm);
        let position_nm = c.emitter_position_nm.unwrap_or(c.length_nm / 2.0);
        if !(position_nm > 0.0 && position_nm < c.length_nm) {
            return Err(config_err(
                "cavity.emitter_position_nm",
                format!("emitter_position must satisfy 0 < d < L, got {position_nm} nm"),
            ));
        }
        let position = length_from_nm(position_nm);
        let base_cavity = match (c.area_nm2, c.lambda_ev) {
            (Some(_), Some(_)) => {
                return Err(config_err(
                    "cavity",
                    "over-specified coupling: give either area_nm2 (with emitter charge \
                     and mass) or lambda_ev, not both",
                ));
            }
            (None, Some(lam)) => {
                if !(lam >= 0.0) {
                    return Err(config_err("cavity.lambda_ev", "must be non-negative"));
                }
                CavityGeometry::with_coupling(length, position, lam)?
            }
            (area, None) => {
                let area_nm2 = area.unwrap_or(1.0);
                if !(area_nm2 > 0.0) {
                    return Err(config_err("cavity.area_nm2", "must be positive"));
                }
                CavityGeometry::from_emitter(length, position, area_from_nm2(area_nm2), &emitter)?
            }
        };

        let sweep = &self.sweep;
        if sweep.points == 0 {
            return Err(config_err("sweep.points", "must be at least 1"));
        }
        let sweep_values: Vec<f64> = if sweep.points == 1 {
            vec![sweep.start]
        } else {
            (0..sweep.points)
                .map(|i| {
                    sweep.start + (sweep.stop - sweep.start) * i as f64 / (sweep.points - 1) as f64
                })
                .collect()
        };
        for &v in &sweep_values {
            match sweep.parameter {
                SweepParameter::ChargeScale => {
                    if v < 0.0 {
                        return Err(config_err("sweep", "charge_scale must be non-negative"));
                    }
                }
                SweepParameter::EmitterPosition => {
                    if !(v > 0.0 && v < c.length_nm) {
                        return Err(config_err(
                            "sweep",
                            format!(
                                "emitter_position {v} nm outside (0, L = {} nm)",
                                c.length_nm
                            ),
                        ));
                    }
                }
                SweepParameter::CavityLength => {
                    if !(v > position_nm) {
                        return Err(config_err(
                            "sweep",
                            format!(
                                "cavity_length {v} nm must exceed emitter_position {position_nm} nm"
                            ),
                        ));
                    }
                }
            }
        }

        if self.modes.count == 0 {
            return Err(config_err("modes.count", "must be at least 1"));
        }

        let oracle = if self.oracle.enabled {
            let n_modes = self.oracle.n_modes.unwrap_or(self.modes.count);
            if n_modes == 0 {
                return Err(config_err("oracle.n_modes", "must be at least 1"));
            }
            let truncation = match self.oracle.truncation {
                TruncationConfig::Total => Truncation::TotalPhotons(self.oracle.max_photons),
                TruncationConfig::PerMode => Truncation::PerMode(self.oracle.max_photons),
            };
            Some(OracleSettings {
                n_modes,
                truncation,
                tolerance: self.oracle.tolerance,
                state_budget: self.oracle.state_budget,
            })
        } else {
            None
        };

        if self.levels == 0 {
            return Err(config_err("levels", "must be at least 1"));
        }

        Ok(Scenario {
            emitter,
            eigensystem,
            base_cavity,
            sweep_values,
            n_modes: self.modes.count,
            oracle,
            levels: self.levels,
            seed: self.seed,
            config: self,
        })
    }
}

/// Read and resolve a scenario configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<Scenario> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
        config_err(
            &path.as_ref().display().to_string(),
            format!("cannot read: {e}"),
        )
    })?;
    ScenarioConfig::from_json(&text)?.resolve()
}

impl Scenario {
    /// Cavity for one sweep point.
    pub fn cavity_at(&self, value: f64) -> Result<CavityGeometry> {
        let parameter = self.config.sweep.parameter;
        let cavity = match parameter {
            SweepParameter::ChargeScale => self.base_cavity.scaled_charge(value),
            SweepParameter::EmitterPosition => CavityGeometry {
                emitter_position: length_from_nm(value),
                ..self.base_cavity
            },
            SweepParameter::CavityLength => CavityGeometry {
                length: length_from_nm(value),
                ..self.base_cavity
            },
        };
        cavity.validate()?;
        Ok(cavity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "emitter": { "n_levels": 2, "hopping": -0.35 },
        "cavity": { "length_nm": 477.0 }
    }"#;

    #[test]
    fn minimal_config_defaults() {
        let sc = ScenarioConfig::from_json(MINIMAL)
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!(sc.n_modes, 50);
        assert!(sc.oracle.is_none());
        assert_eq!(sc.sweep_values.len(), 20);
        assert_eq!(sc.sweep_values[0], 0.0);
        assert_eq!(*sc.sweep_values.last().unwrap(), 1.0);
        assert_eq!(sc.levels, 5);
        // emitter centered by default
        assert!(
            (sc.base_cavity.emitter_position - sc.base_cavity.length / 2.0).abs()
                < 1e-15 * sc.base_cavity.length
        );
        // area defaults to 1 nm^2 and lambda follows from (q, m, S)
        assert!(sc.base_cavity.coupling > 0.0);
    }

    #[test]
    fn position_out_of_range_names_field() {
        let text = r#"{
            "emitter": { "n_levels": 2, "hopping": -0.35 },
            "cavity": { "length_nm": 100.0, "emitter_position_nm": 150.0 }
        }"#;
        let err = ScenarioConfig::from_json(text)
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(err.to_string().contains("emitter_position"), "{err}");
    }

    #[test]
    fn overspecified_coupling_rejected() {
        let text = r#"{
            "emitter": { "n_levels": 2, "hopping": -0.35 },
            "cavity": { "length_nm": 477.0, "area_nm2": 1.0, "lambda_ev": 0.2 }
        }"#;
        let err = ScenarioConfig::from_json(text)
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(err.to_string().contains("over-specified"), "{err}");
    }

    #[test]
    fn lambda_direct_and_charge_sweep() {
        let text = r#"{
            "emitter": { "n_levels": 2, "hopping": -0.35 },
            "cavity": { "length_nm": 477.0, "lambda_ev": 0.25 },
            "sweep": { "parameter": "charge_scale", "start": 0.0, "stop": 1.0, "points": 3 }
        }"#;
        let sc = ScenarioConfig::from_json(text).unwrap().resolve().unwrap();
        assert_eq!(sc.base_cavity.coupling, 0.25);
        let mid = sc.cavity_at(0.5).unwrap();
        assert!((mid.coupling - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn site_length_keyword_and_number() {
        let auto = r#"{
            "emitter": { "n_levels": 2, "hopping": -0.35, "site_length_nm": "auto" },
            "cavity": { "length_nm": 477.0 }
        }"#;
        assert!(ScenarioConfig::from_json(auto).unwrap().resolve().is_ok());
        let fixed = r#"{
            "emitter": { "n_levels": 2, "hopping": -0.35, "site_length_nm": 0.5 },
            "cavity": { "length_nm": 477.0 }
        }"#;
        let sc = ScenarioConfig::from_json(fixed).unwrap().resolve().unwrap();
        assert!((sc.eigensystem.site_length - length_from_nm(0.5)).abs() < 1e-15);
        let bad = r#"{
            "emitter": { "n_levels": 2, "hopping": -0.35, "site_length_nm": "calibrate" },
            "cavity": { "length_nm": 477.0 }
        }"#;
        assert!(ScenarioConfig::from_json(bad).unwrap().resolve().is_err());
    }

    #[test]
    fn unknown_field_rejected_at_parse() {
        let text = r#"{
            "emitter": { "n_levels": 2, "hopping": -0.35, "charg": 2.0 },
            "cavity": { "length_nm": 477.0 }
        }"#;
        assert!(ScenarioConfig::from_json(text).is_err());
    }

    #[test]
    fn sweep_range_validation() {
        let text = r#"{
            "emitter": { "n_levels": 2, "hopping": -0.35 },
            "cavity": { "length_nm": 100.0 },
            "sweep": { "parameter": "emitter_position", "start": 10.0, "stop": 120.0, "points": 5 }
        }"#;
        assert!(ScenarioConfig::from_json(text).unwrap().resolve().is_err());
    }
}
