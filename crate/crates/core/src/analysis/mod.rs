//! Convergence scans over basis sizes and spectral stability classification.
//!
//! A level is *stable real* when its eigenvalue stops moving between the two
//! largest sizes and has negligible imaginary part, *complex* when it stops
//! moving with a finite imaginary part, and *unstable real* when it stays
//! real but keeps drifting as the basis grows.

mod families;
mod matching;

pub use families::{analytic_spectrum, AnalyticFamily, FamilyKind, UnknownFamily};
pub use matching::{match_levels, match_spectra, Trajectory};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::basis::{assemble, AssemblyOptions, BasisError};
use crate::eig::{eig, EigError, EigOptions, Spectrum};
use crate::parser::OperatorExpr;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("invalid scan sizes: {0}")]
    InvalidSizes(String),
    #[error("assembly failed at N={size}: {source}")]
    Assembly { size: usize, source: BasisError },
    #[error("eigensolver failed at N={size}: {source}")]
    Eigen { size: usize, source: EigError },
}

pub const MIN_SCAN_SIZE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScanOptions {
    pub assembly: AssemblyOptions,
    pub eig: EigOptions,
}

#[derive(Debug, Clone)]
pub struct ConvergenceScan {
    pub hamiltonian: OperatorExpr,
    pub sizes: Vec<usize>,
    pub spectra: Vec<Spectrum>,
    pub options: ScanOptions,
}

/// Assembles and diagonalizes `expr` at every size with the same padding.
/// Sizes are solved in parallel; results keep the order of `sizes`.
pub fn run_scan(
    expr: &OperatorExpr,
    sizes: &[usize],
    options: &ScanOptions,
) -> Result<ConvergenceScan, AnalysisError> {
    if sizes.is_empty() {
        return Err(AnalysisError::InvalidSizes("no sizes given".into()));
    }
    if let Some(&small) = sizes.iter().find(|&&n| n < MIN_SCAN_SIZE) {
        return Err(AnalysisError::InvalidSizes(format!(
            "size {small} is below the minimum of {MIN_SCAN_SIZE}"
        )));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AnalysisError::InvalidSizes("sizes must be strictly increasing".into()));
    }
    let spectra = sizes
        .par_iter()
        .map(|&size| solve_at(expr, size, options))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConvergenceScan {
        hamiltonian: expr.clone(),
        sizes: sizes.to_vec(),
        spectra,
        options: *options,
    })
}

/// Single assemble + eig at one basis size.
pub fn solve_at(expr: &OperatorExpr, size: usize, options: &ScanOptions) -> Result<Spectrum, AnalysisError> {
    let spec = options
        .assembly
        .spec(size)
        .map_err(|source| AnalysisError::Assembly { size, source })?;
    let m = assemble(expr, spec, &options.assembly).map_err(|source| AnalysisError::Assembly { size, source })?;
    eig(&m, &options.eig).map_err(|source| AnalysisError::Eigen { size, source })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StabilityKind {
    StableReal,
    UnstableReal,
    Complex,
    Unresolved,
}

impl StabilityKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StabilityKind::StableReal => "StableReal",
            StabilityKind::UnstableReal => "UnstableReal",
            StabilityKind::Complex => "Complex",
            StabilityKind::Unresolved => "Unresolved",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityClass {
    pub kind: StabilityKind,
    /// `|E₂ − E₁| / (1 + |E₂|)` between the two largest sizes.
    pub drift: f64,
    /// Largest `|Im E|` over all sizes on the trajectory.
    pub max_imag: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub eps_conv: f64,
    pub eps_imag: f64,
    pub levels: usize,
}

pub const DEFAULT_EPS_CONV: f64 = 1e-6;
pub const DEFAULT_EPS_IMAG: f64 = 1e-8;
pub const DEFAULT_LEVELS: usize = 8;

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            eps_conv: DEFAULT_EPS_CONV,
            eps_imag: DEFAULT_EPS_IMAG,
            levels: DEFAULT_LEVELS,
        }
    }
}

fn is_real(z: Complex64, eps_imag: f64) -> bool {
    z.im.abs() <= eps_imag * (1.0 + z.re.abs())
}

/// Classifies the first `opts.levels` trajectories.
pub fn classify(trajectories: &[Trajectory], opts: &ClassifyOptions) -> Vec<StabilityClass> {
    trajectories
        .iter()
        .take(opts.levels)
        .map(|t| classify_one(t, opts))
        .collect()
}

fn classify_one(t: &Trajectory, opts: &ClassifyOptions) -> StabilityClass {
    let present: Vec<Complex64> = t.values.iter().flatten().copied().collect();
    let max_imag = present.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let n = t.values.len();
    let (Some(Some(e1)), Some(Some(e2))) = (n.checked_sub(2).map(|k| t.values[k]), t.values.last()) else {
        return StabilityClass {
            kind: StabilityKind::Unresolved,
            drift: f64::INFINITY,
            max_imag,
        };
    };
    let drift = (e2 - e1).norm() / (1.0 + e2.norm());
    let converged = drift <= opts.eps_conv;
    let kind = match (converged, is_real(*e2, opts.eps_imag)) {
        (true, true) => StabilityKind::StableReal,
        (true, false) => StabilityKind::Complex,
        (false, _) if present.iter().all(|z| is_real(*z, opts.eps_imag)) => StabilityKind::UnstableReal,
        (false, _) => StabilityKind::Unresolved,
    };
    StabilityClass { kind, drift, max_imag }
}

/// Classification from a single spectrum: no drift can be measured, so it is
/// recorded as zero and only the realness test decides.
pub fn classify_single(value: Complex64, eps_imag: f64) -> StabilityClass {
    let kind = if is_real(value, eps_imag) {
        StabilityKind::StableReal
    } else {
        StabilityKind::Complex
    };
    StabilityClass {
        kind,
        drift: 0.0,
        max_imag: value.im.abs(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifiedLevel {
    pub level: usize,
    /// Index of the matched trajectory, `None` when fewer stable levels exist.
    pub trajectory: Option<usize>,
    pub computed: Option<Complex64>,
    pub residual: Option<f64>,
    pub class: Option<StabilityClass>,
    pub analytic: Complex64,
    pub abs_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub hamiltonian: OperatorExpr,
    pub family: AnalyticFamily,
    pub sizes: Vec<usize>,
    pub tol: f64,
    pub levels: Vec<VerifiedLevel>,
    pub passed: bool,
}

/// Compares the first `levels` stable-real trajectories of a scan of `expr`
/// with the closed-form spectrum of `family`. The caller is responsible for
/// pairing the right Hamiltonian with the family.
pub fn verify(
    expr: &OperatorExpr,
    family: AnalyticFamily,
    sizes: &[usize],
    tol: f64,
    levels: usize,
    options: &ScanOptions,
    classify_opts: &ClassifyOptions,
) -> Result<VerificationReport, AnalysisError> {
    let scan = run_scan(expr, sizes, options)?;
    let trajectories = match_levels(&scan);
    let all = ClassifyOptions {
        levels: trajectories.len(),
        ..*classify_opts
    };
    let classes = classify(&trajectories, &all);
    let last = scan.spectra.last().expect("scan has at least one size");
    let mut stable = trajectories
        .iter()
        .zip(&classes)
        .enumerate()
        .filter(|(_, (_, c))| c.kind == StabilityKind::StableReal);

    let rows: Vec<VerifiedLevel> = (0..levels)
        .map(|level| {
            let analytic = analytic_spectrum(&family, level);
            match stable.next() {
                Some((idx, (traj, class))) => {
                    let computed = traj.last_value().expect("stable trajectories end at the largest size");
                    let abs_error = (computed - analytic).norm();
                    VerifiedLevel {
                        level,
                        trajectory: Some(idx),
                        computed: Some(computed),
                        residual: traj.last_index().and_then(|i| last.residuals.get(i).copied()),
                        class: Some(*class),
                        analytic,
                        abs_error,
                        pass: abs_error <= tol,
                    }
                }
                None => VerifiedLevel {
                    level,
                    trajectory: None,
                    computed: None,
                    residual: None,
                    class: None,
                    analytic,
                    abs_error: f64::INFINITY,
                    pass: false,
                },
            }
        })
        .collect();
    let passed = rows.iter().all(|r| r.pass);
    Ok(VerificationReport {
        hamiltonian: expr.clone(),
        family,
        sizes: sizes.to_vec(),
        tol,
        levels: rows,
        passed,
    })
}
