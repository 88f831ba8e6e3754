//! Command-line front end. Each invocation runs one experiment from a JSON
//! configuration and writes a JSON or CSV report.
//!
//! Exit codes: 0 when every tolerance is met, 2 on a tolerance failure,
//! 3 on a configuration or input error, 1 on an I/O failure.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use commands::{
    evaluate, run_convergence, run_finite_type, run_ks_report, run_onb, run_reproduce, Artifact, Evaluation,
};
pub use config::{Coordinate, ExperimentConfig, Formula, PointSpec};

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_TOLERANCE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "reprokernel", version, about = "Reproducing-kernel experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a reproducing formula at one point.
    Reproduce(Common),
    /// Kerzman-Stein operator report for a planar domain.
    KsReport(Common),
    /// Error against resolution, as CSV.
    Converge(Common),
    /// Sampled finite-type constants.
    FiniteType(Common),
    /// Orthonormal-basis kernel report.
    Onb(Common),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Reproduce(_) => "reproduce",
            Command::KsReport(_) => "ks-report",
            Command::Converge(_) => "converge",
            Command::FiniteType(_) => "finite-type",
            Command::Onb(_) => "onb",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Reproduce(c)
            | Command::KsReport(c)
            | Command::Converge(c)
            | Command::FiniteType(c)
            | Command::Onb(c) => c,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Boundary nodes for planar domains, grid resolution in C^n.
    #[arg(long)]
    pub resolution: Option<usize>,
}

/// Loads the configuration and applies command-line overrides.
pub fn resolve_config(command: &Command) -> Result<ExperimentConfig> {
    let common = command.common();
    let mut config = ExperimentConfig::load(&common.config).map_err(|e| match e {
        Error::Io(io) => Error::Config(format!("cannot read {}: {io}", common.config.display())),
        other => other,
    })?;
    if let Some(name) = &config.command {
        if name != command.name() {
            return Err(Error::Config(format!(
                "configuration is for `{name}`, not `{}`",
                command.name()
            )));
        }
    }
    if let Some(seed) = common.seed {
        config.seed = Some(seed);
    }
    if let Some(tol) = common.tol {
        config.tol = Some(tol);
    }
    if let Some(r) = common.resolution {
        if config.domain.is_planar() {
            config.n = Some(r);
        } else {
            config.resolution = Some(r);
        }
    }
    config.validate()?;
    Ok(config)
}

pub fn execute(command: &Command, config: &ExperimentConfig) -> Result<Artifact> {
    match command {
        Command::Reproduce(_) => run_reproduce(config),
        Command::KsReport(_) => run_ks_report(config),
        Command::Converge(_) => run_convergence(config),
        Command::FiniteType(_) => run_finite_type(config),
        Command::Onb(_) => run_onb(config),
    }
}

fn write_artifact(artifact: &Artifact, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, &artifact.report)?;
            for (ext, text) in &artifact.extras {
                std::fs::write(path.with_extension(ext), text)?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(artifact.report.as_bytes())?;
        }
    }
    Ok(())
}

fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

/// Parses arguments, runs the experiment and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let config = match resolve_config(&cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let artifact = match execute(&cli.command, &config) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    // the destination is not part of the hashed configuration
    let out = cli.command.common().out.clone().or(config.output.clone());
    if let Err(e) = write_artifact(&artifact, out.as_deref()) {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    if artifact.pass {
        EXIT_OK
    } else {
        eprintln!("tolerance not met");
        EXIT_TOLERANCE
    }
}
