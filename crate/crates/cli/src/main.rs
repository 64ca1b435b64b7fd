// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use corrdyn_cli::{
    parse_config_with_seed, reproduce_figure, run_experiment, CliError, CliResult, Figure,
    THREADS_ENV,
};

#[derive(Debug, Parser)]
#[command(
    name = "corrdyn",
    version,
    about = "Two-particle correlation dynamics on noisy networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// RNG seed; overrides `seed` in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reproduce one of the four figure configurations.
    Reproduce {
        figure: Figure,
        #[arg(long)]
        out: PathBuf,
    },
    /// Parse and validate a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn read(path: &PathBuf) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("{THREADS_ENV}: {e}")))
}

fn execute(cli: Cli) -> CliResult<()> {
    init_threads()?;
    match cli.command {
        Command::Run { config, out, seed } => {
            let cfg = parse_config_with_seed(&read(&config)?, seed)?;
            let out = out.or_else(|| cfg.output_dir.clone()).ok_or_else(|| {
                CliError::Config("no output directory: set output_dir or pass --out".into())
            })?;
            run_experiment(&cfg, &out)
        }
        Command::Reproduce { figure, out } => {
            let report = reproduce_figure(figure, &out)?;
            for c in &report.checks {
                let mark = if c.passed { "pass" } else { "FAIL" };
                println!(
                    "{mark} {} ({} {} {})",
                    c.name, c.value, c.comparison, c.threshold
                );
            }
            report.into_result()
        }
        Command::Validate { config } => {
            let cfg = parse_config_with_seed(&read(&config)?, None)?;
            println!(
                "ok: {} on {} sites",
                cfg.run_kind.name(),
                cfg.network.n_sites()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
