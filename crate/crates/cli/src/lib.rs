//! Experiment driver for POD reduced-order models of the damped wave equation:
//! configuration, orchestration and CSV output.

pub mod checks;
pub mod config;
pub mod experiments;
pub mod table;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

pub use config::{ConfigError, RunConfig};
pub use table::{Cell, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numerics(#[from] podwave::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0} invariant check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    /// 1 for configuration and I/O problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerics(_) | CliError::ChecksFailed(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Singvals,
    ErrorFormulas,
    RomSweep,
    Profiles,
    TrainInterval,
    Convergence,
    Check,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Solve,
        Command::Singvals,
        Command::ErrorFormulas,
        Command::RomSweep,
        Command::Profiles,
        Command::TrainInterval,
        Command::Convergence,
        Command::Check,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Singvals => "singvals",
            Command::ErrorFormulas => "error-formulas",
            Command::RomSweep => "rom-sweep",
            Command::Profiles => "profiles",
            Command::TrainInterval => "train-interval",
            Command::Convergence => "convergence",
            Command::Check => "check",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

/// Tables a command produces, plus the failed checks for `check`.
pub fn run(command: Command, cfg: &RunConfig) -> Result<(Vec<Table>, usize), CliError> {
    use experiments::*;
    let tables = match command {
        Command::Solve => solve_tables(cfg)?,
        Command::Singvals => singular_value_tables(cfg)?,
        Command::ErrorFormulas => vec![error_formula_table(cfg)?],
        Command::RomSweep => vec![rom_sweep_table(cfg)?],
        Command::Profiles => vec![profile_table(cfg)?],
        Command::TrainInterval => vec![train_interval_table(cfg)?],
        Command::Convergence => vec![convergence_table(cfg)?],
        Command::Check => {
            let outcomes = checks::run_checks(cfg)?;
            for o in &outcomes {
                let status = if o.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{status} {}: {:.3e} (tolerance {:.1e})",
                    o.name, o.value, o.tolerance
                );
            }
            let failed = outcomes.iter().filter(|o| !o.passed()).count();
            return Ok((vec![checks::check_table(&outcomes)], failed));
        }
    };
    Ok((tables, 0))
}

/// `#` header lines: the command and every config value.
pub fn header(command: Command, cfg: &RunConfig) -> Vec<String> {
    let mut lines = vec![format!("podwave {command}")];
    lines.extend(cfg.render());
    lines
}

/// Runs `command` and writes its tables under the output directory.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let (tables, failed) = run(command, cfg)?;
    let dir = cfg.output_dir();
    let head = header(command, cfg);
    let paths = tables
        .iter()
        .map(|t| t.write(&dir, &head))
        .collect::<Result<Vec<_>, _>>()?;
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(
            CliError::from(ConfigError::UnknownKey("x".into())).exit_code(),
            1
        );
        assert_eq!(CliError::from(std::io::Error::other("disk")).exit_code(), 1);
        assert_eq!(CliError::from(podwave::Error::ZeroData).exit_code(), 2);
        assert_eq!(CliError::ChecksFailed(1).exit_code(), 2);
    }

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(c.as_str().parse::<Command>(), Ok(c));
        }
        assert!("plot".parse::<Command>().is_err());
    }
}
