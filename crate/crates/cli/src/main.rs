use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use trimode_cli::{parse_config, run, sweep_options_from_env, Command, ConfigError, RunConfig, RunError};

/// Three-mode optomechanical nonreciprocity: dynamics, scattering and
/// sideband-resolution sweeps.
#[derive(Parser, Debug)]
#[command(name = "trimode", version, after_help = COMMANDS)]
struct Cli {
    /// Command group: dynamics, scatter or full.
    group: String,
    /// Action within the group.
    action: String,
    /// Config file of `key = value` lines; omitted keys take their defaults.
    config: Option<PathBuf>,
    /// Output file (`-` for standard output).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Override one config key; repeatable.
    #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    print_config: bool,
}

const COMMANDS: &str = "Commands:
  dynamics run | fixed-points | regions | hopf | ray
  scatter spectrum | optimize | gamma-sweep | asym-map
  full spectrum | sideband-sweep

Exit status: 0 success, 1 invalid input, 2 numerical failure.
Sweep worker count: TRIMODE_WORKERS (default: available parallelism).";

fn resolve(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let command = Command::parse(&format!("{} {}", cli.group, cli.action))
        .ok_or_else(|| ConfigError::validation("command", format!("unknown command `{} {}`", cli.group, cli.action)))?;
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::validation("config", format!("{}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    for item in &cli.set {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| ConfigError::validation(item, "expected KEY=VALUE"))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(o) = &cli.output {
        cfg.output_path = Some(o.clone());
    }
    if let Some(f) = &cli.format {
        cfg.set("format", f)?;
    }
    cfg.for_command(command)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = resolve(&cli).map_err(RunError::from).and_then(|cfg| {
        if cli.print_config {
            print!("{}", cfg.emit());
            return Ok(());
        }
        let opts = sweep_options_from_env()?;
        run(&cfg, &opts)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("trimode: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
