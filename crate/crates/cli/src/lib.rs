//! Command-line front end: argument parsing, frozen run configurations and
//! exit-code policy. Each subcommand lives in [`cmd`].

pub mod cmd;
pub mod output;
pub mod plot;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use output::Output;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OUTPUT: i32 = 1;
pub const EXIT_HYPOTHESES_NOT_MET: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

pub const ENV_OUT: &str = "AXIBLOW_OUT";
pub const ENV_THREADS: &str = "AXIBLOW_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, manifests or data; exit code 3.
    #[error("{0}")]
    Input(String),
    /// Writing results failed; exit code 1.
    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn input(field: &str, e: impl std::fmt::Display) -> Self {
        Self::Input(format!("{field}: {e}"))
    }

    pub fn code(&self) -> i32 {
        match self {
            Self::Input(_) => EXIT_INPUT,
            Self::Output(_) => EXIT_OUTPUT,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "axiblow", version, about = "Blow-up rescaling diagnostics and self-similar profile certifiers")]
struct Cli {
    /// Output directory [env: AXIBLOW_OUT; default: axiblow-out].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for independent certifier runs [env: AXIBLOW_THREADS].
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Re-run a frozen configuration written by an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    /// Run the axisymmetric or planar solver and dump the trajectory.
    Simulate(cmd::simulate::SimulateArgs),
    /// Rescale a stored trajectory about a blow-up sequence.
    Rescale(cmd::rescale::RescaleArgs),
    /// Classify the regime and check declared parities, decay and signs.
    Validate(cmd::validate::ValidateArgs),
    /// Run contradiction certifiers on a profile manifest.
    Certify(cmd::certify::CertifyArgs),
    /// Check tabulated vorticity against its velocity derivatives.
    Datacheck(cmd::datacheck::DatacheckArgs),
    /// Summarize reports and export plot data.
    Report(cmd::report::ReportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Simulate(_) => "simulate",
            Self::Rescale(_) => "rescale",
            Self::Validate(_) => "validate",
            Self::Certify(_) => "certify",
            Self::Datacheck(_) => "datacheck",
            Self::Report(_) => "report",
        }
    }

    /// Makes every path absolute and checks numeric ranges.
    fn resolve(&mut self) -> Result<(), CliError> {
        match self {
            Self::Simulate(a) => a.resolve(),
            Self::Rescale(a) => a.resolve(),
            Self::Validate(a) => a.resolve(),
            Self::Certify(a) => a.resolve(),
            Self::Datacheck(a) => a.resolve(),
            Self::Report(a) => a.resolve(),
        }
    }
}

/// Effective configuration; its hash prefixes every output file name.
/// The output directory and thread count are deliberately left out, so a
/// replay elsewhere produces the same file names and bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: String,
    pub command: Command,
}

impl RunConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn hash_prefix(&self) -> String {
        format!("{:016x}", axiblow::numeric::fnv1a(self.to_json().as_bytes()))
    }
}

/// Resolves a path against the working directory without requiring it to
/// exist yet.
pub fn absolute(field: &str, p: &Path) -> Result<PathBuf, CliError> {
    std::path::absolute(p).map_err(|e| CliError::input(field, e))
}

pub fn existing(field: &str, p: &Path) -> Result<PathBuf, CliError> {
    p.canonicalize()
        .map_err(|e| CliError::input(field, format!("{}: {e}", p.display())))
}

pub fn read_text(field: &str, p: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(p).map_err(|e| CliError::input(field, format!("{}: {e}", p.display())))
}

pub fn threads_from(flag: Option<usize>) -> Result<usize, CliError> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(ENV_THREADS) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|e| CliError::input(ENV_THREADS, format!("'{s}': {e}")))?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        return Err(CliError::input("threads", "must be at least 1"));
    }
    Ok(n)
}

fn out_dir_from(flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
    let dir = flag
        .or_else(|| std::env::var_os(ENV_OUT).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("axiblow-out"));
    absolute("out", &dir)
}

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let config = match (cli.config, cli.command) {
        (Some(_), Some(c)) => {
            return Err(CliError::input("config", format!("cannot be combined with the {} subcommand", c.name())))
        }
        (Some(path), None) => {
            let text = read_text("config", &path)?;
            let c: RunConfig = serde_json::from_str(&text).map_err(|e| CliError::input("config", e))?;
            let mut again = c.clone();
            again.command.resolve()?;
            if again != c {
                return Err(CliError::input("config", "paths in a frozen config must already be resolved"));
            }
            c
        }
        (None, Some(mut command)) => {
            command.resolve()?;
            RunConfig {
                version: env!("CARGO_PKG_VERSION").to_string(),
                command,
            }
        }
        (None, None) => return Err(CliError::Input("a subcommand or --config is required".into())),
    };
    let threads = threads_from(cli.threads)?;
    let out = Output::create(out_dir_from(cli.out)?, config.hash_prefix())?;
    out.write_text("config.json", &config.to_json())?;
    let code = match &config.command {
        Command::Simulate(a) => cmd::simulate::run(a, &out)?,
        Command::Rescale(a) => cmd::rescale::run(a, &out)?,
        Command::Validate(a) => cmd::validate::run(a, &out)?,
        Command::Certify(a) => cmd::certify::run(a, &out, threads)?,
        Command::Datacheck(a) => cmd::datacheck::run(a, &out)?,
        Command::Report(a) => cmd::report::run(a, &out)?,
    };
    println!("{}", out.path(&format!("{}.json", config.command.name())).display());
    Ok(code)
}
