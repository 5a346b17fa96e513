//! Scenario files: TOML (or JSON) with `reference`, `material`,
//! `interface`, `solver`, `output` and optional `sweep` and `stiffness`
//! blocks.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::CliError;
use crate::constitutive::{MaterialModel, ReferenceState, Stiffness};
use crate::halfspace::{Amplitude, ProblemSpec};
use crate::hyperstress::InterfaceParams;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceBlock {
    pub rhat_s0: f64,
    pub rhat_f0: f64,
    /// Either `v_s0` or both apparent densities.
    pub v_s0: Option<f64>,
    pub rho_s0: Option<f64>,
    pub rho_f0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialBlock {
    pub eps_ss: f64,
    pub eps_ff: f64,
    pub eps_sf: f64,
    #[serde(default)]
    pub c_s: f64,
    #[serde(default)]
    pub c_f: f64,
    pub lambda_s: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfaceBlock {
    pub p_i: f64,
    #[serde(rename = "D_coeff", default)]
    pub d_coeff: f64,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default = "one")]
    pub l: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    #[serde(rename = "X")]
    pub x_max: Option<f64>,
    #[serde(rename = "N")]
    pub nodes: Option<usize>,
    pub newton_tol: Option<f64>,
    pub newton_max_iter: Option<usize>,
    pub grid_stretch: Option<f64>,
    pub amplitude: Option<Amplitude>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_profile")]
    pub profile: String,
    #[serde(default = "default_summary")]
    pub summary: String,
    #[serde(default = "default_report")]
    pub report: String,
    #[serde(default = "default_sweep")]
    pub sweep: String,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_dir() -> PathBuf {
    PathBuf::from(".")
}
fn default_profile() -> String {
    "profile.csv".into()
}
fn default_summary() -> String {
    "summary.txt".into()
}
fn default_report() -> String {
    "report.txt".into()
}
fn default_sweep() -> String {
    "sweep.csv".into()
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            profile: default_profile(),
            summary: default_summary(),
            report: default_report(),
            sweep: default_sweep(),
            format: OutputFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
}

/// Parameters a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
pub enum SweepParameter {
    #[serde(rename = "lambda_s")]
    #[value(name = "lambda_s")]
    LambdaS,
    #[serde(rename = "p_i")]
    #[value(name = "p_i")]
    PI,
    #[serde(rename = "D_coeff")]
    #[value(name = "D_coeff")]
    DCoeff,
    #[serde(rename = "c_s")]
    #[value(name = "c_s")]
    CS,
    #[serde(rename = "c_f")]
    #[value(name = "c_f")]
    CF,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::LambdaS => "lambda_s",
            SweepParameter::PI => "p_i",
            SweepParameter::DCoeff => "D_coeff",
            SweepParameter::CS => "c_s",
            SweepParameter::CF => "c_f",
        }
    }

    /// Copy of `config` with the parameter replaced.
    pub fn apply(self, config: &ScenarioConfig, value: f64) -> ScenarioConfig {
        let mut c = config.clone();
        match self {
            SweepParameter::LambdaS => c.material.lambda_s = value,
            SweepParameter::PI => c.interface.p_i = value,
            SweepParameter::DCoeff => c.interface.d_coeff = value,
            SweepParameter::CS => c.material.c_s = value,
            SweepParameter::CF => c.material.c_f = value,
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub reference: ReferenceBlock,
    pub material: MaterialBlock,
    pub interface: InterfaceBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub output: OutputBlock,
    pub sweep: Option<SweepBlock>,
    /// Stiffness matrix used verbatim; bypasses cross-consistency.
    pub stiffness: Option<Stiffness>,
}

fn config_err(e: crate::Error) -> CliError {
    CliError::Config(e.to_string())
}

impl ScenarioConfig {
    /// Reads a file, applies `key=value` overrides and deserializes it.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        Self::parse(&text, is_json, overrides)
    }

    pub fn parse(text: &str, is_json: bool, overrides: &[String]) -> Result<Self, CliError> {
        let mut value: toml::Value = if is_json {
            serde_json::from_str(text)
                .map_err(|e| CliError::Config(format!("invalid JSON: {e}")))?
        } else {
            text.parse::<toml::Table>()
                .map(toml::Value::Table)
                .map_err(|e| CliError::Config(format!("invalid TOML: {e}")))?
        };
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let config: ScenarioConfig = value
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        config.problem_spec()?;
        Ok(config)
    }

    pub fn reference_state(&self) -> Result<ReferenceState, CliError> {
        let r = &self.reference;
        let state = match (r.v_s0, r.rho_s0, r.rho_f0) {
            (Some(v), None, None) => ReferenceState::from_volume_fraction(r.rhat_s0, r.rhat_f0, v),
            (None, Some(s), Some(f)) => ReferenceState::new(s, f, r.rhat_s0, r.rhat_f0),
            _ => {
                return Err(CliError::Config(
                    "reference: give either v_s0 or both rho_s0 and rho_f0".into(),
                ))
            }
        };
        state.map_err(config_err)
    }

    pub fn material_model(&self) -> Result<MaterialModel, CliError> {
        let m = &self.material;
        MaterialModel::new(m.eps_ss, m.eps_ff, m.eps_sf, m.c_s, m.c_f, m.lambda_s)
            .map_err(config_err)
    }

    pub fn interface_params(&self) -> Result<InterfaceParams, CliError> {
        let i = &self.interface;
        InterfaceParams::new(i.p_i, i.d_coeff, i.alpha, i.l).map_err(config_err)
    }

    /// Validated problem; unset solver fields take the library defaults.
    pub fn problem_spec(&self) -> Result<ProblemSpec, CliError> {
        let mut spec = ProblemSpec::new(
            self.reference_state()?,
            self.material_model()?,
            self.interface_params()?,
        );
        let s = &self.solver;
        spec.x_max = s.x_max;
        spec.nodes = s.nodes.unwrap_or(spec.nodes);
        spec.newton_tol = s.newton_tol.unwrap_or(spec.newton_tol);
        spec.newton_max_iter = s.newton_max_iter.unwrap_or(spec.newton_max_iter);
        spec.grid_stretch = s.grid_stretch.unwrap_or(spec.grid_stretch);
        spec.amplitude = s.amplitude.unwrap_or_default();
        spec.stiffness = self.stiffness;
        spec.validate().map_err(config_err)?;
        Ok(spec)
    }
}

/// Sets a dotted key (`material.c_s=1e-3`) in a TOML tree. The value is
/// read as a TOML literal, falling back to a bare string.
pub fn apply_override(root: &mut toml::Value, spec: &str) -> Result<(), CliError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override {spec:?} is not key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!(
            "override key {key:?} is malformed"
        )));
    }
    let mut node = root;
    for part in &parts[..parts.len() - 1] {
        let table = node
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("override {key:?}: {part} is not a table")))?;
        node = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    }
    let table = node
        .as_table_mut()
        .ok_or_else(|| CliError::Config(format!("override {key:?}: parent is not a table")))?;
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}
