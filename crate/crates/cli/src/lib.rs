//! Command-line front end for the tray transport planner.
//!
//! Exit codes: 0 success, 1 configuration or input error, 2 infeasible plan,
//! 3 validation failure.

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;

use clap::{Parser, Subcommand};
use commands::{CommonArgs, Output};
use config::RunConfig;
use error::CliError;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use waiter_core::Execution;

#[derive(Debug, Parser)]
#[command(name = "waiter", version, about = "Plan and audit tray transport trajectories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Shared {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; overrides the path in the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sampling period in seconds; overrides `sample_dt_s`.
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan with tray rotation and write the trajectory CSV.
    Plan(Shared),
    /// Plan with a level tray and write the trajectory CSV.
    Baseline(Shared),
    /// Compare rotating and level planners on the configured target.
    Compare(Shared),
    /// Sweep a grid of targets in the motion plane.
    Sweep {
        #[command(flatten)]
        shared: Shared,
        /// `x0:x1:n,y0:y1:n`, metres.
        #[arg(long)]
        grid: String,
        /// Evaluate grid points on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Audit a trajectory CSV against the configured object and limits.
    Validate {
        #[command(flatten)]
        shared: Shared,
        /// Trajectory CSV to audit.
        #[arg(long)]
        trajectory: PathBuf,
    },
}

fn common(shared: &Shared) -> CommonArgs {
    CommonArgs {
        out: shared.out.clone(),
        dt: shared.dt,
    }
}

/// Runs one command and returns its output, or the error deciding the exit
/// code. Validation failures still carry their report.
pub fn execute(cli: &Cli) -> Result<Output, (Output, CliError)> {
    let fail = |e: CliError| (Output::default(), e);
    let shared = match &cli.command {
        Command::Plan(s) | Command::Baseline(s) | Command::Compare(s) => s,
        Command::Sweep { shared, .. } | Command::Validate { shared, .. } => shared,
    };
    if let Some(dt) = shared.dt {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(fail(CliError::Config(format!("--dt must be finite and > 0, got {dt}"))));
        }
    }
    let cfg = RunConfig::load(&shared.config).map_err(fail)?;
    let args = common(shared);
    match &cli.command {
        Command::Plan(_) => commands::cmd_plan(&cfg, &args).map_err(fail),
        Command::Baseline(_) => commands::cmd_baseline(&cfg, &args).map_err(fail),
        Command::Compare(_) => commands::cmd_compare(&cfg, &args).map_err(fail),
        Command::Sweep { grid, sequential, .. } => {
            let grid = commands::parse_grid(grid).map_err(fail)?;
            let exec = if *sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            commands::cmd_sweep(&cfg, &grid, exec, &args).map_err(fail)
        }
        Command::Validate { trajectory, .. } => match commands::cmd_validate(&cfg, trajectory, &args).map_err(fail)? {
            (out, None) => Ok(out),
            (out, Some(e)) => Err((out, e)),
        },
    }
}

/// Entry point used by the binary. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let (output, code) = match execute(&cli) {
        Ok(out) => (out, 0),
        Err((out, e)) => {
            let mut out = out;
            out.stderr.push_str(&format!("waiter: {e}\n"));
            (out, e.exit_code())
        }
    };
    let _ = std::io::stdout().write_all(output.stdout.as_bytes());
    let _ = std::io::stderr().write_all(output.stderr.as_bytes());
    code
}
