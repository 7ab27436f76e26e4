use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{RunConfig, DEFAULT_SCAN_SIZES, DEFAULT_TABLE1_SIZES};
use super::report::{BlockSummary, LevelRow, Meta, Report, Tolerances, VariantSummary};
use super::table1::TABLE1;
use super::CliError;
use crate::analysis::{
    classify, classify_single, match_levels, run_scan, solve_at, verify, AnalyticFamily, ClassifyOptions,
    ConvergenceScan, FamilyKind, ScanOptions, StabilityClass, StabilityKind, Trajectory,
};
use crate::basis::AssemblyOptions;
use crate::parser::{parse_hamiltonian, OperatorExpr, ParamBindings};

/// Whether a finished command met its pass criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Mismatch,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Mismatch => 3,
        }
    }
}

fn scan_options(cfg: &RunConfig) -> Result<ScanOptions, CliError> {
    let assembly = AssemblyOptions {
        matexp_tol: cfg.matexp_tol,
        pad: cfg.pad,
    };
    assembly
        .validate()
        .map_err(|e| CliError::Usage(format!("--matexp-tol: {e}")))?;
    Ok(ScanOptions {
        assembly,
        ..Default::default()
    })
}

fn classify_options(cfg: &RunConfig) -> Result<ClassifyOptions, CliError> {
    for (flag, v) in [("--eps-conv", cfg.eps_conv), ("--eps-imag", cfg.eps_imag)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::Usage(format!("{flag}: must be a positive number, got {v}")));
        }
    }
    Ok(ClassifyOptions {
        eps_conv: cfg.eps_conv,
        eps_imag: cfg.eps_imag,
        levels: cfg.levels,
    })
}

/// Evaluates each `--param` value, which may be any scalar expression.
fn bindings(cfg: &RunConfig) -> Result<ParamBindings, CliError> {
    let mut b = ParamBindings::new();
    for (name, text) in &cfg.params {
        let value = parse_hamiltonian(text, &ParamBindings::new())?;
        if !value.is_scalar() {
            return Err(CliError::Usage(format!(
                "--param {name}: value '{text}' must not contain x or p"
            )));
        }
        b.insert(name, value.terms.iter().map(|t| t.coeff).sum())?;
    }
    Ok(b)
}

fn hamiltonian(cfg: &RunConfig, b: &ParamBindings) -> Result<(String, OperatorExpr), CliError> {
    let text = cfg
        .hamiltonian
        .clone()
        .ok_or_else(|| CliError::Usage("missing Hamiltonian (-H EXPR)".into()))?;
    let expr = parse_hamiltonian(&text, b)?;
    Ok((text, expr))
}

fn meta(cfg: &RunConfig, verify_tol: Option<f64>, started: Instant) -> Meta {
    Meta {
        tolerances: Tolerances {
            matexp_tol: cfg.matexp_tol,
            eps_conv: cfg.eps_conv,
            eps_imag: cfg.eps_imag,
            verify_tol,
        },
        timing_ms: cfg.timing.then(|| started.elapsed().as_secs_f64() * 1e3),
    }
}

fn value_row(level: usize, value: Option<Complex64>, residual: Option<f64>, class: &StabilityClass) -> LevelRow {
    let mut row = LevelRow::new(level, class.kind.as_str());
    row.re = value.map(|z| z.re);
    row.im = value.map(|z| z.im);
    row.residual = residual;
    row.drift = Some(class.drift);
    row
}

fn last_residual(scan: &ConvergenceScan, t: &Trajectory) -> Option<f64> {
    let last = scan.spectra.last()?;
    t.last_index().and_then(|i| last.residuals.get(i).copied())
}

pub fn cmd_solve(cfg: &RunConfig) -> Result<(Report, Outcome), CliError> {
    let started = Instant::now();
    let opts = scan_options(cfg)?;
    classify_options(cfg)?;
    let b = bindings(cfg)?;
    let (text, expr) = hamiltonian(cfg, &b)?;
    let sizes = cfg.sizes_or(&DEFAULT_SCAN_SIZES);
    let n = sizes.iter().copied().max().unwrap_or(0);
    if n == 0 {
        return Err(CliError::Usage("--sizes/-N: size must be at least 1".into()));
    }
    let spectrum = solve_at(&expr, n, &opts)?;
    let levels = spectrum
        .eigenvalues
        .iter()
        .zip(&spectrum.residuals)
        .take(cfg.levels)
        .enumerate()
        .map(|(k, (z, r))| value_row(k, Some(*z), Some(*r), &classify_single(*z, cfg.eps_imag)))
        .collect();
    let report = Report {
        command: "solve".into(),
        hamiltonian: text,
        sizes: vec![n],
        pad: cfg.pad,
        levels,
        family: None,
        blocks: vec![],
        meta: meta(cfg, None, started),
    };
    Ok((report, Outcome::Success))
}

fn scan_sizes(cfg: &RunConfig, default: &[usize]) -> Result<Vec<usize>, CliError> {
    let sizes = cfg.sizes_or(default);
    if sizes.len() < 2 {
        return Err(CliError::Usage(format!(
            "--sizes: a scan needs at least two sizes, got {}",
            sizes.len()
        )));
    }
    Ok(sizes)
}

pub fn cmd_scan(cfg: &RunConfig) -> Result<(Report, Outcome), CliError> {
    let started = Instant::now();
    let opts = scan_options(cfg)?;
    let copts = classify_options(cfg)?;
    let b = bindings(cfg)?;
    let (text, expr) = hamiltonian(cfg, &b)?;
    let sizes = scan_sizes(cfg, &DEFAULT_SCAN_SIZES)?;
    let scan = run_scan(&expr, &sizes, &opts)?;
    let trajectories = match_levels(&scan);
    let classes = classify(&trajectories, &copts);
    let levels = trajectories
        .iter()
        .zip(&classes)
        .map(|(t, c)| value_row(t.level, t.last_value(), last_residual(&scan, t), c))
        .collect();
    let report = Report {
        command: "scan".into(),
        hamiltonian: text,
        sizes,
        pad: cfg.pad,
        levels,
        family: None,
        blocks: vec![],
        meta: meta(cfg, None, started),
    };
    Ok((report, Outcome::Success))
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<(Report, Outcome), CliError> {
    let started = Instant::now();
    let name = cfg
        .family
        .as_deref()
        .ok_or_else(|| CliError::Usage("verify needs --family NAME".into()))?;
    let kind: FamilyKind = name.parse()?;
    let family = AnalyticFamily::new(kind, cfg.lambda);
    let opts = scan_options(cfg)?;
    let copts = classify_options(cfg)?;
    if !(cfg.tol.is_finite() && cfg.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol: must be a positive number, got {}", cfg.tol)));
    }

    let mut b = bindings(cfg)?;
    if b.get("l").is_none() {
        b.insert("l", Complex64::new(cfg.lambda, 0.0))?;
    }
    let text = cfg.hamiltonian.clone().unwrap_or_else(|| kind.hamiltonian().to_string());
    let expr = parse_hamiltonian(&text, &b)?;
    let sizes = scan_sizes(cfg, &DEFAULT_SCAN_SIZES)?;
    let result = verify(&expr, family, &sizes, cfg.tol, cfg.levels, &opts, &copts)?;

    let levels = result
        .levels
        .iter()
        .map(|v| {
            let unresolved = StabilityClass {
                kind: StabilityKind::Unresolved,
                drift: f64::INFINITY,
                max_imag: 0.0,
            };
            let mut row = value_row(v.level, v.computed, v.residual, v.class.as_ref().unwrap_or(&unresolved));
            row.analytic = Some(v.analytic.re);
            row.abs_error = Some(v.abs_error);
            row.pass = Some(v.pass);
            row
        })
        .collect();
    let report = Report {
        command: "verify".into(),
        hamiltonian: text,
        sizes,
        pad: cfg.pad,
        levels,
        family: Some(kind.name().to_string()),
        blocks: vec![],
        meta: meta(cfg, Some(cfg.tol), started),
    };
    let outcome = if result.passed { Outcome::Success } else { Outcome::Mismatch };
    Ok((report, outcome))
}

struct VariantRun {
    rows: Vec<LevelRow>,
    summary: VariantSummary,
}

fn run_variant(
    block: usize,
    name: &str,
    text: &str,
    targets: &[f64; 4],
    sizes: &[usize],
    opts: &ScanOptions,
    copts: &ClassifyOptions,
) -> Result<VariantRun, CliError> {
    let expr = parse_hamiltonian(text, &ParamBindings::new())?;
    let scan = run_scan(&expr, sizes, opts)?;
    let trajectories = match_levels(&scan);
    let classes = classify(&trajectories, &ClassifyOptions { levels: targets.len(), ..*copts });
    let mut max_abs_diff: f64 = 0.0;
    let mut rows = Vec::with_capacity(targets.len());
    for (level, target) in targets.iter().enumerate() {
        let (value, residual, class) = match (trajectories.get(level), classes.get(level)) {
            (Some(t), Some(c)) => (t.last_value(), last_residual(&scan, t), *c),
            _ => (
                None,
                None,
                StabilityClass {
                    kind: StabilityKind::Unresolved,
                    drift: f64::INFINITY,
                    max_imag: 0.0,
                },
            ),
        };
        let diff = value.map_or(f64::INFINITY, |z| (z - Complex64::new(*target, 0.0)).norm());
        max_abs_diff = max_abs_diff.max(diff);
        let mut row = value_row(level, value, residual, &class);
        row.block = Some(block);
        row.variant = Some(name.to_string());
        row.target = Some(*target);
        row.abs_error = Some(diff);
        rows.push(row);
    }
    let all_stable_real = rows.iter().all(|r| r.class == StabilityKind::StableReal.as_str());
    Ok(VariantRun {
        rows,
        summary: VariantSummary {
            name: name.to_string(),
            hamiltonian: text.to_string(),
            max_abs_diff,
            all_stable_real,
        },
    })
}

pub fn cmd_table1(cfg: &RunConfig) -> Result<(Report, Outcome), CliError> {
    let started = Instant::now();
    let opts = scan_options(cfg)?;
    let copts = classify_options(cfg)?;
    let sizes = scan_sizes(cfg, &DEFAULT_TABLE1_SIZES)?;

    let jobs: Vec<(usize, usize)> = TABLE1
        .iter()
        .enumerate()
        .flat_map(|(b, block)| (0..block.variants.len()).map(move |v| (b, v)))
        .collect();
    let runs: Vec<VariantRun> = jobs
        .par_iter()
        .map(|&(b, v)| {
            let block = &TABLE1[b];
            let variant = &block.variants[v];
            run_variant(b + 1, variant.name, variant.hamiltonian, &block.targets, &sizes, &opts, &copts)
        })
        .collect::<Result<_, _>>()?;

    let mut levels = Vec::new();
    let mut blocks = Vec::new();
    let mut runs = runs.into_iter();
    for (b, block) in TABLE1.iter().enumerate() {
        let mut variants = Vec::new();
        for _ in block.variants {
            let run = runs.next().expect("one run per variant");
            levels.extend(run.rows);
            variants.push(run.summary);
        }
        let best = variants
            .iter()
            .min_by(|a, b| a.max_abs_diff.total_cmp(&b.max_abs_diff))
            .expect("every block has a variant");
        let ok = |v: &VariantSummary| v.max_abs_diff <= block.tolerance && (!block.require_converged || v.all_stable_real);
        let pass = variants.iter().any(ok);
        blocks.push(BlockSummary {
            block: b + 1,
            label: block.label.to_string(),
            tolerance: block.tolerance,
            winner: Some(best.name.clone()),
            variants: variants.clone(),
            pass,
        });
    }
    let outcome = if blocks.iter().all(|b| b.pass) { Outcome::Success } else { Outcome::Mismatch };
    let report = Report {
        command: "table1".into(),
        hamiltonian: TABLE1.iter().map(|b| b.label).collect::<Vec<_>>().join("; "),
        sizes,
        pad: cfg.pad,
        levels,
        family: None,
        blocks,
        meta: meta(cfg, None, started),
    };
    Ok((report, outcome))
}
