//! Run configuration: TOML schema, validation with field-path error
//! messages, and resolution into library domain objects.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use chiral_cavity::model::{
    coulomb_potential, harmonic2d_potential, power_law_potential, CavityParams, CentralPotential,
    Chirality, Dimensionality, PowerTerm,
};
use chiral_cavity::units::UnitSystem;

use crate::cli::{FormatArg, UnitArg};

/// Failure classified for the process exit status: 2 for configuration
/// problems, 3 for numerical ones.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError::Numerical(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

fn default_mass() -> f64 {
    1.0
}

fn default_charge() -> f64 {
    -1.0
}

fn default_coulomb_k() -> f64 {
    1.0
}

fn default_points() -> usize {
    200
}

fn default_g_values() -> Vec<f64> {
    vec![0.01, 0.02, 0.04]
}

fn default_n_mat() -> u32 {
    10
}

fn default_n_ph() -> u32 {
    8
}

fn default_gate() -> f64 {
    0.02
}

/// Top-level TOML document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub cavity: CavityConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi: Option<RabiConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleConfig>,
}

/// Exactly one matter system, tagged by block name.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemConfig {
    Hydrogen(HydrogenConfig),
    Ho2d(Ho2dConfig),
    CustomPotential(CustomPotentialConfig),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HydrogenConfig {
    /// Coulomb strength; 1 is the physical electron-proton value.
    #[serde(default = "default_coulomb_k")]
    pub k_au: f64,
    #[serde(default = "default_mass")]
    pub mass_au: f64,
    #[serde(default = "default_charge")]
    pub charge_au: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ho2dConfig {
    pub omega_au: f64,
    #[serde(default = "default_mass")]
    pub mass_au: f64,
    #[serde(default = "default_charge")]
    pub charge_au: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomPotentialConfig {
    pub dimensionality: u32,
    pub terms: Vec<TermConfig>,
    pub r_min_au: f64,
    pub r_max_au: f64,
    pub points: usize,
    #[serde(default = "default_mass")]
    pub mass_au: f64,
    #[serde(default = "default_charge")]
    pub charge_au: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub coefficient: f64,
    pub exponent: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    pub g: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_c_au: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_c_per_s: Option<f64>,
    pub chirality: ChiralityConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChiralityConfig {
    Plus,
    Minus,
}

impl ChiralityConfig {
    pub fn to_domain(self) -> Chirality {
        match self {
            ChiralityConfig::Plus => Chirality::Plus,
            ChiralityConfig::Minus => Chirality::Minus,
        }
    }
}

/// Quantum numbers; which fields apply depends on the system block.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_z: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_right: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_left: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mirror: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub scale: SweepScale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "g")]
    G,
    #[serde(rename = "omega_c")]
    OmegaC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<FormatArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<UnitArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RabiConfig {
    pub excited: StateConfig,
    pub ground: StateConfig,
    pub t_max_au: f64,
    #[serde(default = "default_points")]
    pub points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default = "default_g_values")]
    pub g_values: Vec<f64>,
    #[serde(default = "default_n_mat")]
    pub n_mat: u32,
    #[serde(default = "default_n_ph")]
    pub n_ph: u32,
    #[serde(default = "default_gate")]
    pub gate: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            g_values: default_g_values(),
            n_mat: default_n_mat(),
            n_ph: default_n_ph(),
            gate: default_gate(),
        }
    }
}

/// The matter side of the problem after validation.
#[derive(Debug, Clone)]
pub enum SystemKind {
    Hydrogen { k: f64 },
    Ho2d { omega: f64 },
    Custom { potential: CentralPotential<f64>, r_min: f64, r_max: f64, points: usize },
}

impl SystemKind {
    pub fn name(&self) -> &'static str {
        match self {
            SystemKind::Hydrogen { .. } => "hydrogen",
            SystemKind::Ho2d { .. } => "ho2d",
            SystemKind::Custom { .. } => "custom-potential",
        }
    }
}

/// Validated configuration: domain objects plus the echo of the raw config.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub params: CavityParams<f64>,
    pub system: SystemKind,
    pub mass: f64,
    pub charge: f64,
}

pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    toml::from_str(text).map_err(|e| CliError::config(format!("config parse: {e}")))
}

pub fn resolve(config: RunConfig) -> Result<Resolved, CliError> {
    let (mass, charge) = match &config.system {
        SystemConfig::Hydrogen(h) => (h.mass_au, h.charge_au),
        SystemConfig::Ho2d(o) => (o.mass_au, o.charge_au),
        SystemConfig::CustomPotential(c) => (c.mass_au, c.charge_au),
    };
    let omega_c = match (config.cavity.omega_c_au, config.cavity.omega_c_per_s) {
        (Some(au), None) => au,
        (None, Some(per_s)) => UnitSystem::Si.angular_frequency_to_atomic(per_s),
        (Some(_), Some(_)) => {
            return Err(CliError::config(
                "cavity.omega_c_au / cavity.omega_c_per_s: set exactly one, both are present",
            ))
        }
        (None, None) => {
            return Err(CliError::config(
                "cavity.omega_c_au / cavity.omega_c_per_s: set exactly one, neither is present",
            ))
        }
    };
    let params = CavityParams::new(
        config.cavity.g,
        omega_c,
        config.cavity.chirality.to_domain(),
        mass,
        charge,
    )
    .map_err(|e| CliError::config(e.to_string()))?;
    let system = match &config.system {
        SystemConfig::Hydrogen(h) => {
            let potential = coulomb_potential(h.k_au)
                .map_err(|e| CliError::config(format!("system.hydrogen.k_au: {}", e.message)))?;
            match potential {
                CentralPotential::Coulomb { k } => SystemKind::Hydrogen { k },
                _ => unreachable!("coulomb_potential builds the Coulomb variant"),
            }
        }
        SystemConfig::Ho2d(o) => {
            harmonic2d_potential(o.mass_au, o.omega_au)
                .map_err(|e| CliError::config(format!("system.ho2d: {}", e.message)))?;
            SystemKind::Ho2d { omega: o.omega_au }
        }
        SystemConfig::CustomPotential(c) => {
            let dimensionality = match c.dimensionality {
                2 => Dimensionality::Two,
                3 => Dimensionality::Three,
                other => {
                    return Err(CliError::config(format!(
                        "system.custom-potential.dimensionality: must be 2 or 3, got {other}"
                    )))
                }
            };
            let terms = c
                .terms
                .iter()
                .map(|t| PowerTerm { coefficient: t.coefficient, exponent: t.exponent })
                .collect();
            let potential = power_law_potential(terms, dimensionality)
                .map_err(|e| CliError::config(format!("system.custom-potential: {e}")))?;
            if !(c.r_min_au > 0.0 && c.r_max_au > c.r_min_au) {
                return Err(CliError::config(
                    "system.custom-potential.r_min_au/r_max_au: need 0 < r_min_au < r_max_au",
                ));
            }
            if c.points < 100 {
                return Err(CliError::config(
                    "system.custom-potential.points: need at least 100 grid points",
                ));
            }
            SystemKind::Custom { potential, r_min: c.r_min_au, r_max: c.r_max_au, points: c.points }
        }
    };
    Ok(Resolved { config, params, system, mass, charge })
}

/// Hydrogen-style quantum numbers from a state block. `prefix` names the
/// block in error messages, e.g. `state` or `rabi.excited`.
pub fn hydrogen_state(
    prefix: &str,
    state: &StateConfig,
) -> Result<(u32, u32, Option<i64>), CliError> {
    for (set, name) in [
        (state.n_right.is_some(), "n_right"),
        (state.n_left.is_some(), "n_left"),
        (state.mirror.is_some(), "mirror"),
    ] {
        if set {
            return Err(CliError::config(format!(
                "{prefix}.{name}: not meaningful for a hydrogen-like system"
            )));
        }
    }
    let n = state.n.ok_or_else(|| {
        CliError::config(format!("{prefix}.n: required (principal quantum number)"))
    })?;
    let l = state.l.ok_or_else(|| {
        CliError::config(format!("{prefix}.l: required (azimuthal quantum number)"))
    })?;
    if n < 1 || l >= n {
        return Err(CliError::config(format!(
            "{prefix}.n/{prefix}.l: need n >= 1 and l < n, got n = {n}, l = {l}"
        )));
    }
    if let Some(l_z) = state.l_z {
        if l_z.unsigned_abs() > u64::from(l) {
            return Err(CliError::config(format!(
                "{prefix}.l_z: need |l_z| <= l, got l_z = {l_z}, l = {l}"
            )));
        }
    }
    Ok((n, l, state.l_z))
}

/// Oscillator occupation pair from a state block.
pub fn ho2d_state(prefix: &str, state: &StateConfig) -> Result<(u32, u32, bool), CliError> {
    for (set, name) in
        [(state.n.is_some(), "n"), (state.l.is_some(), "l"), (state.l_z.is_some(), "l_z")]
    {
        if set {
            return Err(CliError::config(format!(
                "{prefix}.{name}: not meaningful for the ho2d system; use n_right/n_left"
            )));
        }
    }
    let n_right = state.n_right.ok_or_else(|| {
        CliError::config(format!("{prefix}.n_right: required for the ho2d system"))
    })?;
    let n_left = state.n_left.ok_or_else(|| {
        CliError::config(format!("{prefix}.n_left: required for the ho2d system"))
    })?;
    Ok((n_right, n_left, state.mirror.unwrap_or(false)))
}

/// Swept parameter values in emission order.
pub fn sweep_values(sweep: &SweepConfig) -> Result<Vec<f64>, CliError> {
    if sweep.count == 0 {
        return Err(CliError::config("sweep.count: must be at least 1"));
    }
    if !(sweep.start.is_finite() && sweep.stop.is_finite()) {
        return Err(CliError::config("sweep.start/sweep.stop: must be finite"));
    }
    if sweep.scale == SweepScale::Log && !(sweep.start > 0.0 && sweep.stop > 0.0) {
        return Err(CliError::config(
            "sweep.start/sweep.stop: log scale needs strictly positive endpoints",
        ));
    }
    if sweep.count == 1 {
        return Ok(vec![sweep.start]);
    }
    let steps = (sweep.count - 1) as f64;
    Ok((0..sweep.count)
        .map(|i| {
            let f = i as f64 / steps;
            match sweep.scale {
                SweepScale::Linear => sweep.start + (sweep.stop - sweep.start) * f,
                SweepScale::Log => sweep.start * (sweep.stop / sweep.start).powf(f),
            }
        })
        .collect())
}
