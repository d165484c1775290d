use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use podwave_cli::{execute, Command, RunConfig};

#[derive(Parser)]
#[command(
    name = "podwave",
    version,
    about = "POD reduced-order models of the 1-D damped wave equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Finite element trajectory and energy series
    Solve(Settings),
    /// POD singular values for each method
    Singvals(Settings),
    /// Actual data error against the tail-eigenvalue formulas
    ErrorFormulas(Settings),
    /// ROM errors and bound ratios over a damping sweep
    RomSweep(Settings),
    /// Finite element and ROM spatial profiles
    Profiles(Settings),
    /// Final-time ROM error for shorter snapshot windows
    TrainInterval(Settings),
    /// Time-step convergence against the modal series
    Convergence(Settings),
    /// Invariant suite at small scale
    Check(Settings),
}

/// Every key can also be set in the `--config` file as `key = value`.
#[derive(Args)]
struct Settings {
    /// Flat `key = value` config file, applied before the flags below
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "n_elements")]
    n_elements: Option<String>,
    /// Time step; quotients like 1/800 are accepted
    #[arg(long = "dt")]
    dt: Option<String>,
    /// Final time
    #[arg(long = "T")]
    t_final: Option<String>,
    /// End of the snapshot window (defaults to T)
    #[arg(long = "T_train")]
    t_train: Option<String>,
    /// Wave speed
    #[arg(long = "c")]
    c: Option<String>,
    /// Viscous damping coefficient
    #[arg(long = "D")]
    d: Option<String>,
    /// Kelvin-Voigt damping coefficient
    #[arg(long = "G")]
    g: Option<String>,
    /// Comma list of standard, dq1, ddq
    #[arg(long = "pod_method")]
    pod_method: Option<String>,
    /// Comma list of basis sizes
    #[arg(long = "r_list")]
    r_list: Option<String>,
    #[arg(long = "seed")]
    seed: Option<String>,
    /// Falls back to $PODWAVE_OUTPUT_DIR, then ./output
    #[arg(long = "output_dir")]
    output_dir: Option<String>,
    /// direct or gram
    #[arg(long = "svd_route")]
    svd_route: Option<String>,
    /// Relative eigenvalue cutoff, or auto
    #[arg(long = "rank_tol")]
    rank_tol: Option<String>,
    /// Damping coefficient swept by rom-sweep: D or G
    #[arg(long = "sweep")]
    sweep: Option<String>,
    #[arg(long = "sweep_values")]
    sweep_values: Option<String>,
    #[arg(long = "T_train_list")]
    t_train_list: Option<String>,
    /// Profile times
    #[arg(long = "times")]
    times: Option<String>,
    #[arg(long = "conv_n_elements")]
    conv_n_elements: Option<String>,
    /// Final time of the convergence study
    #[arg(long = "conv_T")]
    conv_t_final: Option<String>,
    #[arg(long = "conv_dt_list")]
    conv_dt_list: Option<String>,
    /// Keep every stride-th state in trajectory.csv
    #[arg(long = "stride")]
    stride: Option<String>,
}

impl Settings {
    fn overrides(self) -> (Option<PathBuf>, Vec<(String, String)>) {
        let pairs = [
            ("n_elements", self.n_elements),
            ("dt", self.dt),
            ("T", self.t_final),
            ("T_train", self.t_train),
            ("c", self.c),
            ("D", self.d),
            ("G", self.g),
            ("pod_method", self.pod_method),
            ("r_list", self.r_list),
            ("seed", self.seed),
            ("output_dir", self.output_dir),
            ("svd_route", self.svd_route),
            ("rank_tol", self.rank_tol),
            ("sweep", self.sweep),
            ("sweep_values", self.sweep_values),
            ("T_train_list", self.t_train_list),
            ("times", self.times),
            ("conv_n_elements", self.conv_n_elements),
            ("conv_T", self.conv_t_final),
            ("conv_dt_list", self.conv_dt_list),
            ("stride", self.stride),
        ];
        let set = pairs
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect();
        (self.config, set)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, settings) = match cli.command {
        Cmd::Solve(s) => (Command::Solve, s),
        Cmd::Singvals(s) => (Command::Singvals, s),
        Cmd::ErrorFormulas(s) => (Command::ErrorFormulas, s),
        Cmd::RomSweep(s) => (Command::RomSweep, s),
        Cmd::Profiles(s) => (Command::Profiles, s),
        Cmd::TrainInterval(s) => (Command::TrainInterval, s),
        Cmd::Convergence(s) => (Command::Convergence, s),
        Cmd::Check(s) => (Command::Check, s),
    };
    let (path, overrides) = settings.overrides();
    let result = RunConfig::load(path.as_deref(), &overrides)
        .map_err(Into::into)
        .and_then(|cfg| execute(command, &cfg));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
