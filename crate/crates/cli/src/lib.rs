//! Command-line front end: config parsing, subcommand dispatch and
//! deterministic CSV/JSON emission.

pub mod commands;
pub mod config;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub use commands::{execute, RunError};
pub use config::{parse_config, Command, ConfigError, Format, RunConfig, Theta, Value};
pub use table::{Cell, Table};
use trimode_core::sweep::SweepOptions;

/// Environment variable holding the sweep worker count.
pub const WORKERS_ENV: &str = "TRIMODE_WORKERS";

/// Worker count from [`WORKERS_ENV`]; unset or empty means the available
/// parallelism.
pub fn sweep_options_from_env() -> Result<SweepOptions, ConfigError> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(SweepOptions { workers: Some(n) }),
            _ => Err(ConfigError::validation(WORKERS_ENV, format!("expected a positive integer, got `{v}`"))),
        },
        _ => Ok(SweepOptions::default()),
    }
}

/// Output format: explicit setting, else a `.json` extension, else CSV.
pub fn resolved_format(cfg: &RunConfig) -> Format {
    cfg.format.unwrap_or_else(|| match &cfg.output_path {
        Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
        _ => Format::Csv,
    })
}

pub fn write_table<W: Write>(cfg: &RunConfig, table: &Table, out: W) -> io::Result<()> {
    match resolved_format(cfg) {
        Format::Csv => table.write_csv(out),
        Format::Json => {
            let params: Vec<(String, String)> = cfg.parameters.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
            let name = cfg.command.map_or("", |c| c.name());
            table.write_json(out, name, &params)
        }
    }
}

/// Runs a bound config and writes its table to the configured output
/// (standard output when none or `-`).
pub fn run(cfg: &RunConfig, opts: &SweepOptions) -> Result<(), RunError> {
    let table = execute(cfg, opts)?;
    match cfg.output_path.as_deref() {
        None => write_table(cfg, &table, io::stdout().lock())?,
        Some(p) if p == Path::new("-") => write_table(cfg, &table, io::stdout().lock())?,
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            write_table(cfg, &table, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}
