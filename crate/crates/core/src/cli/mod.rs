//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 numerical failure,
//! 3 verification or table mismatch.

mod commands;
pub mod config;
pub mod report;
pub mod table1;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::analysis::{AnalysisError, UnknownFamily};
use crate::parser::ParseError;

pub use commands::{cmd_scan, cmd_solve, cmd_table1, cmd_verify, Outcome};
pub use config::{OutputFormat, RunConfig, Settings};
pub use report::{emit, render, Report};

pub const CONFIG_ENV: &str = "MDM_SPECTRA_CONFIG";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("unknown family '{}' (expected one of: pt_shift, nonpt_shift, scaled, scaled_exp, harmonic)", .0.0)]
    UnknownFamily(#[from] UnknownFamily),
    #[error("{0}")]
    Analysis(#[from] AnalysisError),
    #[error("cannot read config file {path}: {source}")]
    Config { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Analysis(AnalysisError::InvalidSizes(_)) => 1,
            CliError::Analysis(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mdm-spectra", version, about = "Spectra of non-Hermitian Hamiltonians in a truncated oscillator basis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues at a single basis size (the largest given)
    Solve(CommonArgs),
    /// Follow levels across basis sizes and classify their stability
    Scan(CommonArgs),
    /// Compare a scan with a closed-form spectrum
    Verify(CommonArgs),
    /// Recompute the reference energy table for three complex Hamiltonians
    Table1(CommonArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Hamiltonian expression in x, p, i, exp(...) and bound parameters
    #[arg(short = 'H', long = "hamiltonian", value_name = "EXPR", allow_hyphen_values = true)]
    pub hamiltonian: Option<String>,
    /// Bind a parameter to a scalar expression (repeatable)
    #[arg(long = "param", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    pub params: Vec<String>,
    /// Comma-separated basis sizes
    #[arg(long, value_name = "N,N,...", value_delimiter = ',', conflicts_with = "n")]
    pub sizes: Option<Vec<usize>>,
    /// Single basis size
    #[arg(short = 'N', value_name = "N")]
    pub n: Option<usize>,
    /// Extra basis states used during assembly and then discarded
    #[arg(long)]
    pub pad: Option<usize>,
    #[arg(long, value_name = "TOL")]
    pub matexp_tol: Option<f64>,
    /// Relative drift below which a level counts as converged
    #[arg(long, value_name = "EPS")]
    pub eps_conv: Option<f64>,
    /// Relative imaginary part below which a level counts as real
    #[arg(long, value_name = "EPS")]
    pub eps_imag: Option<f64>,
    /// Number of levels to report
    #[arg(long, value_name = "K")]
    pub levels: Option<usize>,
    /// Analytic family for verify
    #[arg(long, value_name = "NAME")]
    pub family: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Absolute tolerance for verify
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_name = "json|csv|text")]
    pub format: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Config file with `key = value` lines
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Record wall time in the report
    #[arg(long)]
    pub timing: bool,
}

impl CommonArgs {
    pub fn settings(&self) -> Result<Settings, CliError> {
        let mut params = std::collections::BTreeMap::new();
        for p in &self.params {
            let (k, v) = config::parse_param(p)?;
            params.insert(k, v);
        }
        Ok(Settings {
            hamiltonian: self.hamiltonian.clone(),
            params,
            sizes: self.sizes.clone().or(self.n.map(|n| vec![n])),
            pad: self.pad,
            matexp_tol: self.matexp_tol,
            eps_conv: self.eps_conv,
            eps_imag: self.eps_imag,
            levels: self.levels,
            family: self.family.clone(),
            lambda: self.lambda,
            tol: self.tol,
            format: self.format.as_deref().map(str::parse).transpose()?,
            out: self.out.clone(),
        })
    }
}

/// Merges flags with the config file named by `--config`, or by `env_config`
/// when no flag is given.
pub fn resolve(args: &CommonArgs, env_config: Option<OsString>) -> Result<RunConfig, CliError> {
    let flags = args.settings()?;
    let path = args.config.clone().or(env_config.map(PathBuf::from));
    let file = match path {
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| CliError::Config {
                path: p.display().to_string(),
                source: e,
            })?;
            Settings::from_config_text(&text)?
        }
        None => Settings::default(),
    };
    Ok(RunConfig::resolve(flags, file, args.timing))
}

type CommandFn = fn(&RunConfig) -> Result<(Report, Outcome), CliError>;

fn execute(cli: &Cli, env_config: Option<OsString>, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let (args, cmd): (_, CommandFn) = match &cli.command {
        Command::Solve(a) => (a, cmd_solve),
        Command::Scan(a) => (a, cmd_scan),
        Command::Verify(a) => (a, cmd_verify),
        Command::Table1(a) => (a, cmd_table1),
    };
    let cfg = resolve(args, env_config)?;
    let (report, outcome) = cmd(&cfg)?;
    emit(&report, cfg.format, cfg.out.as_deref(), stdout)?;
    Ok(outcome)
}

/// Runs the tool with explicit arguments and streams, returning the exit code.
pub fn run_with_io<I, T>(
    args: I,
    env_config: Option<OsString>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match execute(&cli, env_config, stdout) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let _ = writeln!(stderr, "mdm-spectra: error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let env = std::env::var_os(CONFIG_ENV);
    run_with_io(std::env::args_os(), env, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
