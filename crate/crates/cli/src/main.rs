use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};

use finsler_cli::config::{load, resolve, set_key};
use finsler_cli::emit::{table, write_reports, write_sweep};
use finsler_cli::run::{exit_code, run_value, Overrides};
use finsler_core::theorems::CheckKind;

#[derive(Parser)]
#[command(name = "finsler", version, about = "Numerical checks for hypersurfaces in Finsler spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Multiply every tolerance.
    #[arg(long)]
    tol_scale: Option<f64>,
    /// Quadrature order (overrides `grid_order`).
    #[arg(long)]
    grid_order: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides { grid_order: self.grid_order, tol_scale: self.tol_scale }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks listed in a config.
    Check {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Re-run a config once per value of a scalar key.
    Sweep {
        config: PathBuf,
        /// Dotted key, e.g. `wind.c`, `grid_order` or `options.flow_times`.
        #[arg(long)]
        key: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// List the registered checks.
    ListChecks,
    /// Parse and validate a config without running it.
    Validate { config: PathBuf },
}

fn output_dir(flag: &Option<PathBuf>, value: &serde_json::Value) -> Option<PathBuf> {
    flag.clone().or_else(|| value["output"]["dir"].as_str().map(PathBuf::from))
}

fn execute(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::ListChecks => {
            for kind in CheckKind::ALL {
                println!("{:<26} {}", kind.name(), kind.description());
            }
            Ok(0)
        }
        Command::Validate { config } => {
            let value = load(&config)?;
            let resolved = resolve(value)?;
            println!("ok: {} check(s), digest {}", resolved.checks.len(), resolved.digest);
            Ok(0)
        }
        Command::Check { config, common } => {
            let value = load(&config)?;
            let out = output_dir(&common.out, &value);
            let (_, reports) = run_value(value, common.overrides())?;
            print!("{}", table(&reports));
            if let Some(dir) = out {
                write_reports(&dir, &reports)?;
            }
            Ok(exit_code(&reports))
        }
        Command::Sweep { config, key, values, common } => {
            let value = load(&config)?;
            let out = output_dir(&common.out, &value);
            let mut runs = Vec::new();
            for v in values {
                let mut swept = value.clone();
                set_key(&mut swept, &key, v)?;
                let (_, reports) = run_value(swept, common.overrides())?;
                println!("# {key} = {v}");
                print!("{}", table(&reports));
                runs.push((v, reports));
            }
            if runs.is_empty() {
                bail!("--values: at least one value is required");
            }
            if let Some(dir) = out {
                write_sweep(&dir, &runs)?;
            }
            let all: Vec<_> = runs.into_iter().flat_map(|(_, r)| r).collect();
            Ok(exit_code(&all))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = finsler_cli::configure_threads().and_then(|_| execute(cli));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
