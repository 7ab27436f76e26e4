//! Report model and its text, CSV and JSON renderings.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::config::OutputFormat;
use super::CliError;

/// Significant digits for every printed number.
pub const SIG_DIGITS: usize = 9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub hamiltonian: String,
    pub sizes: Vec<usize>,
    pub pad: usize,
    pub levels: Vec<LevelRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<BlockSummary>,
    pub meta: Meta,
}

/// One printed row. The optional columns are filled by verify and table1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub level: usize,
    pub re: Option<f64>,
    pub im: Option<f64>,
    pub residual: Option<f64>,
    pub class: String,
    pub drift: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl LevelRow {
    pub fn new(level: usize, class: &str) -> Self {
        LevelRow {
            block: None,
            variant: None,
            level,
            re: None,
            im: None,
            residual: None,
            class: class.to_string(),
            drift: None,
            analytic: None,
            target: None,
            abs_error: None,
            pass: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockSummary {
    pub block: usize,
    pub label: String,
    pub tolerance: f64,
    pub variants: Vec<VariantSummary>,
    pub winner: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantSummary {
    pub name: String,
    pub hamiltonian: String,
    pub max_abs_diff: f64,
    pub all_stable_real: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub tolerances: Tolerances,
    /// Wall time, only recorded on request so that output stays reproducible.
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub matexp_tol: f64,
    pub eps_conv: f64,
    pub eps_imag: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify_tol: Option<f64>,
}

/// `x` with `SIG_DIGITS` significant digits. Fixed notation for moderate
/// exponents, scientific otherwise.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..9).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// Rounds to `SIG_DIGITS` significant digits through the decimal rendering.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap()
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

fn rounded(report: &Report) -> Report {
    let r = |x: Option<f64>| x.map(round_sig);
    let mut out = report.clone();
    for row in &mut out.levels {
        row.re = r(row.re);
        row.im = r(row.im);
        row.residual = r(row.residual);
        // JSON has no infinity: an unmeasurable drift becomes null
        row.drift = r(row.drift).filter(|d| d.is_finite());
        row.analytic = r(row.analytic);
        row.target = r(row.target);
        row.abs_error = r(row.abs_error).filter(|d| d.is_finite());
    }
    for block in &mut out.blocks {
        for v in &mut block.variants {
            v.max_abs_diff = round_sig(v.max_abs_diff);
        }
    }
    out.meta.timing_ms = r(out.meta.timing_ms);
    out
}

#[derive(Clone, Copy)]
enum Column {
    Block,
    Variant,
    Level,
    Re,
    Im,
    Residual,
    Class,
    Drift,
    Analytic,
    Target,
    AbsError,
    Pass,
}

impl Column {
    fn name(self) -> &'static str {
        match self {
            Column::Block => "block",
            Column::Variant => "variant",
            Column::Level => "level",
            Column::Re => "re",
            Column::Im => "im",
            Column::Residual => "residual",
            Column::Class => "class",
            Column::Drift => "drift",
            Column::Analytic => "analytic",
            Column::Target => "target",
            Column::AbsError => "abs_error",
            Column::Pass => "pass",
        }
    }

    fn cell(self, row: &LevelRow) -> String {
        match self {
            Column::Block => row.block.map(|b| b.to_string()).unwrap_or_default(),
            Column::Variant => row.variant.clone().unwrap_or_default(),
            Column::Level => row.level.to_string(),
            Column::Re => opt(row.re),
            Column::Im => opt(row.im),
            Column::Residual => opt(row.residual),
            Column::Class => row.class.clone(),
            Column::Drift => opt(row.drift),
            Column::Analytic => opt(row.analytic),
            Column::Target => opt(row.target),
            Column::AbsError => opt(row.abs_error),
            Column::Pass => row.pass.map(|p| p.to_string()).unwrap_or_default(),
        }
    }
}

fn columns(report: &Report) -> Vec<Column> {
    use Column::*;
    let mut cols = vec![Level, Re, Im, Residual, Class, Drift];
    let any = |f: fn(&LevelRow) -> bool| report.levels.iter().any(f);
    if any(|r| r.analytic.is_some()) {
        cols.extend([Analytic, AbsError, Pass]);
    }
    if any(|r| r.target.is_some()) {
        cols.extend([Block, Variant, Target, AbsError]);
    }
    cols
}

fn render_csv(report: &Report) -> String {
    let cols = columns(report);
    let mut s = cols.iter().map(|c| c.name()).collect::<Vec<_>>().join(",");
    s.push('\n');
    for row in &report.levels {
        let cells: Vec<String> = cols.iter().map(|c| c.cell(row)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn render_text(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "command:     {}", report.command);
    let _ = writeln!(s, "hamiltonian: {}", report.hamiltonian);
    if let Some(f) = &report.family {
        let _ = writeln!(s, "family:      {f}");
    }
    let sizes: Vec<String> = report.sizes.iter().map(|n| n.to_string()).collect();
    let _ = writeln!(s, "sizes:       {}  (pad {})", sizes.join(","), report.pad);
    if let Some(t) = report.meta.timing_ms {
        let _ = writeln!(s, "time:        {} ms", fmt_sig(t));
    }
    s.push('\n');

    let cols = columns(report);
    let cells: Vec<Vec<String>> = report
        .levels
        .iter()
        .map(|row| cols.iter().map(|c| c.cell(row)).collect())
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| cells.iter().map(|r| r[j].len()).fold(c.name().len(), usize::max))
        .collect();
    let line = |items: Vec<&str>| {
        let padded: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(t, w)| format!("{t:>w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let _ = writeln!(s, "{}", line(cols.iter().map(|c| c.name()).collect()));
    for row in &cells {
        let _ = writeln!(s, "{}", line(row.iter().map(String::as_str).collect()));
    }

    for block in &report.blocks {
        let _ = writeln!(
            s,
            "\nblock {} [{}] tolerance {}: {}",
            block.block,
            block.label,
            fmt_sig(block.tolerance),
            if block.pass { "match" } else { "MISMATCH" }
        );
        for v in &block.variants {
            let mark = if block.winner.as_deref() == Some(v.name.as_str()) { "*" } else { " " };
            let _ = writeln!(
                s,
                "  {mark} {:<16} max|diff| {:>16}  stable_real {}  {}",
                v.name,
                fmt_sig(v.max_abs_diff),
                v.all_stable_real,
                v.hamiltonian
            );
        }
    }
    s
}

pub fn render(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => render_text(report),
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rounded(report)).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

/// Renders `report` and writes it to `path`, or to `stdout` when no path is given.
pub fn emit(
    report: &Report,
    format: OutputFormat,
    path: Option<&Path>,
    stdout: &mut dyn std::io::Write,
) -> Result<(), CliError> {
    let text = render(report, format);
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Output {
            path: p.display().to_string(),
            source: e,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Output {
            path: "<stdout>".into(),
            source: e,
        }),
    }
}
