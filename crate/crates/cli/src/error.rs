// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] corrdyn_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("failed checks: {}", .0.join(", "))]
    ChecksFailed(Vec<String>),
    #[error("steady state not reached by t_max = {t_max} (residual {residual:e})")]
    NotConverged { t_max: f64, residual: f64 },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 2 config, 3 failed checks, 4 non-convergence,
    /// 1 anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Core(corrdyn_core::Error::ComplexPopulation { .. }) => 1,
            Self::Core(_) => 2,
            Self::Io { .. } => 1,
            Self::ChecksFailed(_) => 3,
            Self::NotConverged { .. } => 4,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
