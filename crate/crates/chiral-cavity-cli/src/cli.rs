//! Command-line surface: global flags, subcommands, and the enum values
//! shared with the configuration file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use chiral_cavity::units::EnergyUnit;

/// Spectral shifts and vacuum Rabi dynamics of a charged particle in a
/// single-mode chiral cavity.
#[derive(Debug, Parser)]
#[command(name = "chiral-cavity", version, about)]
pub struct Cli {
    /// Path to a TOML run configuration
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Built-in scenario name (conflicts with --config)
    #[arg(long, global = true, value_name = "NAME", conflicts_with = "config")]
    pub preset: Option<String>,

    /// Data file destination; when absent, data goes to stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Data format, overriding the config's output block
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,

    /// Energy unit for emitted columns, overriding the config
    #[arg(long, global = true, value_enum)]
    pub unit: Option<UnitArg>,

    /// Worker threads for sweeps (default: one per core)
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral shift of the configured state
    Shift(ShiftArgs),
    /// Shift rows along a swept parameter
    Sweep(SweepArgs),
    /// Exact-diagonalization check of the perturbative doublet splitting
    Oracle(OracleArgs),
    /// Two-level vacuum Rabi time series
    Rabi(RabiArgs),
    /// Free-space radiative level shift of a hydrogen state
    Lamb,
}

#[derive(Debug, Args)]
pub struct ShiftArgs {
    /// Evaluation route: closed forms, the numeric engine, or both
    #[arg(long, value_enum, default_value_t = PathArg::Analytic)]
    pub path: PathArg,

    /// Add the in-plane Laplacian diagnostic column (numeric path only)
    #[arg(long)]
    pub transverse: bool,

    /// Dump the solved radial function to this CSV path (numeric path only)
    #[arg(long, value_name = "PATH")]
    pub dump_radial: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Evaluation route: closed forms, the numeric engine, or both
    #[arg(long, value_enum, default_value_t = PathArg::Analytic)]
    pub path: PathArg,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Relative-error gate; exceeding it exits with status 3
    #[arg(long, value_name = "X")]
    pub gate: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RabiArgs {
    /// Emit flat curves for a selection-rule-forbidden pair instead of failing
    #[arg(long)]
    pub allow_forbidden: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum PathArg {
    #[value(name = "analytic")]
    #[serde(rename = "analytic")]
    Analytic,
    #[value(name = "numeric")]
    #[serde(rename = "numeric")]
    Numeric,
    #[value(name = "both")]
    #[serde(rename = "both")]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum FormatArg {
    #[value(name = "csv")]
    #[serde(rename = "csv")]
    Csv,
    #[value(name = "json")]
    #[serde(rename = "json")]
    Json,
}

impl FormatArg {
    pub fn label(self) -> &'static str {
        match self {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum UnitArg {
    #[value(name = "hartree")]
    #[serde(rename = "hartree")]
    Hartree,
    #[value(name = "meV")]
    #[serde(rename = "meV")]
    MilliElectronVolt,
    #[value(name = "GHz")]
    #[serde(rename = "GHz")]
    Gigahertz,
    #[value(name = "cm-1")]
    #[serde(rename = "cm-1")]
    InverseCentimeter,
}

impl UnitArg {
    pub fn energy_unit(self) -> EnergyUnit {
        match self {
            UnitArg::Hartree => EnergyUnit::Hartree,
            UnitArg::MilliElectronVolt => EnergyUnit::MilliElectronVolt,
            UnitArg::Gigahertz => EnergyUnit::Gigahertz,
            UnitArg::InverseCentimeter => EnergyUnit::InverseCentimeter,
        }
    }

    /// Suffix appended to energy column names.
    pub fn suffix(self) -> &'static str {
        match self {
            UnitArg::Hartree => "hartree",
            UnitArg::MilliElectronVolt => "mev",
            UnitArg::Gigahertz => "ghz",
            UnitArg::InverseCentimeter => "inv_cm",
        }
    }

    /// Spelling used on the command line and in reports.
    pub fn label(self) -> &'static str {
        match self {
            UnitArg::Hartree => "hartree",
            UnitArg::MilliElectronVolt => "meV",
            UnitArg::Gigahertz => "GHz",
            UnitArg::InverseCentimeter => "cm-1",
        }
    }
}
