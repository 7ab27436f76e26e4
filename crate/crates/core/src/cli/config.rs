//! Run settings from flags, a `key = value` config file and built-in
//! defaults, in that order of precedence.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use super::CliError;
use crate::analysis::{DEFAULT_EPS_CONV, DEFAULT_EPS_IMAG, DEFAULT_LEVELS};
use crate::basis::{DEFAULT_MATEXP_TOL, DEFAULT_PAD};

pub const DEFAULT_SCAN_SIZES: [usize; 3] = [48, 64, 96];
pub const DEFAULT_TABLE1_SIZES: [usize; 3] = [96, 128, 160];
pub const DEFAULT_VERIFY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::Usage(format!(
                "--format: unknown format '{other}' (expected json, csv or text)"
            ))),
        }
    }
}

/// One layer of optional settings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub hamiltonian: Option<String>,
    /// Parameter name to value expression.
    pub params: BTreeMap<String, String>,
    pub sizes: Option<Vec<usize>>,
    pub pad: Option<usize>,
    pub matexp_tol: Option<f64>,
    pub eps_conv: Option<f64>,
    pub eps_imag: Option<f64>,
    pub levels: Option<usize>,
    pub family: Option<String>,
    pub lambda: Option<f64>,
    pub tol: Option<f64>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
}

impl Settings {
    /// Fields set in `self` win over `lower`.
    pub fn overlay(self, lower: Settings) -> Settings {
        let mut params = lower.params;
        params.extend(self.params);
        Settings {
            hamiltonian: self.hamiltonian.or(lower.hamiltonian),
            params,
            sizes: self.sizes.or(lower.sizes),
            pad: self.pad.or(lower.pad),
            matexp_tol: self.matexp_tol.or(lower.matexp_tol),
            eps_conv: self.eps_conv.or(lower.eps_conv),
            eps_imag: self.eps_imag.or(lower.eps_imag),
            levels: self.levels.or(lower.levels),
            family: self.family.or(lower.family),
            lambda: self.lambda.or(lower.lambda),
            tol: self.tol.or(lower.tol),
            format: self.format.or(lower.format),
            out: self.out.or(lower.out),
        }
    }

    /// Parses a config file: one `key = value` per line, `#` starts a comment.
    pub fn from_config_text(text: &str) -> Result<Settings, CliError> {
        let mut s = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CliError::Usage(format!("config line {}: {msg}", lineno + 1));
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(format!("expected 'key = value', found '{line}'")));
            };
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            if let Some(name) = key.strip_prefix("param.") {
                s.params.insert(name.to_string(), value.to_string());
                continue;
            }
            match key.as_str() {
                "hamiltonian" => s.hamiltonian = Some(value.to_string()),
                "sizes" => s.sizes = Some(parse_sizes(value).map_err(err)?),
                "N" | "n" => s.sizes = Some(vec![parse_num(&key, value).map_err(err)?]),
                "pad" => s.pad = Some(parse_num(&key, value).map_err(err)?),
                "matexp_tol" => s.matexp_tol = Some(parse_num(&key, value).map_err(err)?),
                "eps_conv" => s.eps_conv = Some(parse_num(&key, value).map_err(err)?),
                "eps_imag" => s.eps_imag = Some(parse_num(&key, value).map_err(err)?),
                "levels" => s.levels = Some(parse_num(&key, value).map_err(err)?),
                "family" => s.family = Some(value.to_string()),
                "lambda" => s.lambda = Some(parse_num(&key, value).map_err(err)?),
                "tol" => s.tol = Some(parse_num(&key, value).map_err(err)?),
                "format" => s.format = Some(value.parse()?),
                "out" => s.out = Some(PathBuf::from(value)),
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        Ok(s)
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("invalid value '{value}' for '{key}'"))
}

pub fn parse_sizes(value: &str) -> Result<Vec<usize>, String> {
    value
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid size '{}' in '{value}'", v.trim()))
        })
        .collect()
}

/// Splits `name=value` from `--param`.
pub fn parse_param(arg: &str) -> Result<(String, String), CliError> {
    match arg.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() && !v.trim().is_empty() => {
            Ok((k.trim().to_string(), v.trim().to_string()))
        }
        _ => Err(CliError::Usage(format!("--param: expected NAME=VALUE, found '{arg}'"))),
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub hamiltonian: Option<String>,
    pub params: BTreeMap<String, String>,
    /// `None` means the command's own default.
    pub sizes: Option<Vec<usize>>,
    pub pad: usize,
    pub matexp_tol: f64,
    pub eps_conv: f64,
    pub eps_imag: f64,
    pub levels: usize,
    pub family: Option<String>,
    pub lambda: f64,
    pub tol: f64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::resolve(Settings::default(), Settings::default(), false)
    }
}

impl RunConfig {
    pub fn resolve(flags: Settings, file: Settings, timing: bool) -> RunConfig {
        let s = flags.overlay(file);
        RunConfig {
            hamiltonian: s.hamiltonian,
            params: s.params,
            sizes: s.sizes,
            pad: s.pad.unwrap_or(DEFAULT_PAD),
            matexp_tol: s.matexp_tol.unwrap_or(DEFAULT_MATEXP_TOL),
            eps_conv: s.eps_conv.unwrap_or(DEFAULT_EPS_CONV),
            eps_imag: s.eps_imag.unwrap_or(DEFAULT_EPS_IMAG),
            levels: s.levels.unwrap_or(DEFAULT_LEVELS),
            family: s.family,
            lambda: s.lambda.unwrap_or(0.0),
            tol: s.tol.unwrap_or(DEFAULT_VERIFY_TOL),
            format: s.format.unwrap_or_default(),
            out: s.out,
            timing,
        }
    }

    pub fn sizes_or(&self, default: &[usize]) -> Vec<usize> {
        self.sizes.clone().unwrap_or_else(|| default.to_vec())
    }
}
