//! Output routing. With a destination file the data lands there, a metadata
//! sidecar lands next to it, and the human summary goes to stdout; without
//! one the data goes to stdout and the summary to stderr so pipes stay
//! clean.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::cli::{Cli, FormatArg, UnitArg};
use crate::config::{CliError, OutputConfig, RunConfig};
use crate::table::Table;

/// Where records go and how they are spelled.
#[derive(Debug, Clone)]
pub struct Emitter {
    pub format: FormatArg,
    pub unit: UnitArg,
    pub destination: Option<PathBuf>,
    threads: Option<usize>,
    source: Source,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase")]
enum Source {
    Preset(String),
    Config(PathBuf),
}

impl Emitter {
    /// Command-line flags override the config's output block.
    pub fn new(cli: &Cli, output: Option<&OutputConfig>) -> Self {
        let from_config = |f: fn(&OutputConfig) -> Option<FormatArg>| output.and_then(f);
        let format = cli.format.or(from_config(|o| o.format)).unwrap_or(FormatArg::Csv);
        let unit = cli.unit.or(output.and_then(|o| o.unit)).unwrap_or(UnitArg::Hartree);
        let destination = cli.output.clone().or_else(|| output.and_then(|o| o.path.clone()));
        let source = match (&cli.preset, &cli.config) {
            (Some(name), _) => Source::Preset(name.clone()),
            (_, Some(path)) => Source::Config(path.clone()),
            (None, None) => unreachable!("loader requires a config source"),
        };
        Emitter { format, unit, destination, threads: cli.threads, source }
    }

    /// Writes the data table and its sidecar, or prints the data to stdout.
    pub fn emit(&self, table: &Table, config: &RunConfig) -> Result<(), CliError> {
        let rendered = table.render(self.format);
        match &self.destination {
            Some(path) => {
                write_file(path, rendered.as_bytes())?;
                let sidecar = self.sidecar(config)?;
                write_file(&sidecar_path(path), sidecar.as_bytes())?;
            }
            None => print!("{rendered}"),
        }
        Ok(())
    }

    /// Prints one summary line to stdout when data went to a file, to
    /// stderr when data went to stdout.
    pub fn summarize(&self, line: &str) {
        if self.destination.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }

    fn sidecar(&self, config: &RunConfig) -> Result<String, CliError> {
        let args: Vec<String> = std::env::args().skip(1).collect();
        let value = json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": args,
            "format": self.format.label(),
            "unit": self.unit.label(),
            "threads": self.threads,
            "source": self.source,
            "config": config,
        });
        let mut text = serde_json::to_string_pretty(&value)
            .map_err(|e| CliError::config(format!("metadata sidecar: {e}")))?;
        text.push('\n');
        Ok(text)
    }
}

/// `out.csv` gets its metadata at `out.csv.meta.json`.
pub fn sidecar_path(data_path: &Path) -> PathBuf {
    let mut name = data_path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes)
        .map_err(|e| CliError::config(format!("output: cannot write {}: {e}", path.display())))
}
