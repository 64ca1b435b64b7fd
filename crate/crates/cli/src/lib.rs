// SPDX-License-Identifier: Apache-2.0

//! Experiment runner: strict JSON configs, CSV/PGM/JSON outputs and the
//! canned figure reproductions behind the `corrdyn` binary.

pub mod config;
pub mod error;
pub mod figures;
pub mod output;
pub mod runner;

pub use config::{parse_config, parse_config_with_seed, ExperimentConfig, Figure, RunKind};
pub use error::{CliError, CliResult};
pub use figures::{reproduce_figure, Check, FigureReport};
pub use runner::{run_experiment, Summary};

/// Environment variable capping the number of ensemble worker threads.
pub const THREADS_ENV: &str = "CORRDYN_THREADS";
