//! Command-line front end: the `verify` identity suite and the `converge`
//! experiments.

pub mod config;
pub mod converge;
pub mod verify;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::{Config, Experiment, ExperimentParams};
pub use converge::Table;
pub use verify::VerifyReport;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_CONFIG
    }
}

pub fn load_config(path: Option<&Path>) -> Result<Config, CliError> {
    match path {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    }
}

/// Runs `verify`; command-line seed and trial count override the config.
pub fn cmd_verify(path: Option<&Path>, seed: Option<u64>, trials: Option<usize>) -> Result<VerifyReport, CliError> {
    let mut config = load_config(path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(trials) = trials {
        config.trials = trials;
    }
    verify::run(&config)
}

/// Runs `converge`; with `out` set the table goes to `<out>/<experiment>.csv`
/// and the path is returned.
pub fn cmd_converge(
    experiment: Experiment,
    path: Option<&Path>,
    out: Option<&Path>,
) -> Result<(Table, Option<PathBuf>), CliError> {
    let config = load_config(path)?;
    let table = converge::run(experiment, &config.experiment(experiment))?;
    let written = match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            let file = dir.join(format!("{experiment}.csv"));
            std::fs::write(&file, table.to_csv()).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
            Some(file)
        }
        None => None,
    };
    Ok((table, written))
}
