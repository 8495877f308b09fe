//! Command-line frontend: config-driven spectral shifts, parameter sweeps,
//! exact-diagonalization cross-checks, Rabi time series, and continuum
//! (Lamb) shifts, with deterministic CSV/JSON output.

// Gate checks write `!(x <= limit)` instead of `x > limit` so that NaN fails
// the gate too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;
mod commands;
mod config;
mod emit;
mod table;

use clap::Parser;

fn main() {
    let parsed = cli::Cli::parse();
    match commands::run(&parsed) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(err.exit_code());
        }
    }
}
