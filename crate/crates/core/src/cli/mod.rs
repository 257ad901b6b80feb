//! Command-line front end. Every command reads an optional flat `key = value`
//! config, writes CSV files into the output directory, and finishes with a
//! `<command>.meta.json` sidecar listing parameters, tolerances and files.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical or I/O failure.

pub mod config;
pub mod estimate;
pub mod figures;
pub mod output;
pub mod run;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::Settings;
use figures::FigureId;
use output::Output;

#[derive(Debug, Parser)]
#[command(name = "felphase", version, about = "Quantum and classical phase-space dynamics of a low-gain FEL electron")]
pub struct Cli {
    /// Flat key = value parameter file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory receiving CSV files and the metadata sidecar.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mathieu energies and Fourier coefficients at one ν, plus scattering amplitudes.
    Bands,
    /// Wigner and classical fields with their marginals at the configured times.
    Evolve,
    /// Classical distance d_cl at the configured times.
    Distance,
    /// Numerical and small-signal gain curves.
    Gain,
    /// Regenerate the data behind one figure.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
    },
    /// Space-charge and spontaneous-emission times from laboratory parameters.
    Estimate,
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Bands => "bands".into(),
            Command::Evolve => "evolve".into(),
            Command::Distance => "distance".into(),
            Command::Gain => "gain".into(),
            Command::Figure { id } => format!("figure {}", id.label()),
            Command::Estimate => "estimate".into(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Numeric(#[from] crate::Error),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(crate::Error::Domain(_) | crate::Error::Truncation(_)) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<PathBuf, CliError> {
    let settings = match &cli.config {
        Some(path) => Settings::parse(&fs::read_to_string(path)?).map_err(CliError::Config)?,
        None => Settings::default(),
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        // A second initialisation in the same process is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut out = Output::new(&cli.out)?;
    let parameters = match &cli.command {
        Command::Bands => run::bands(&settings, &mut out)?,
        Command::Evolve => run::evolve(&settings, &mut out)?,
        Command::Distance => run::distance(&settings, &mut out)?,
        Command::Gain => run::gain(&settings, &mut out)?,
        Command::Figure { id } => figures::figure(*id, &settings, &mut out)?,
        Command::Estimate => run::estimate(&settings, &mut out)?,
    };
    Ok(out.finish(&cli.command.name(), &parameters)?)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("felphase: {e}");
            e.exit_code()
        }
    }
}
