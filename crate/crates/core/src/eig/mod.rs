//! Eigenvalues of dense complex non-Hermitian matrices.
//!
//! Balancing, Householder reduction to Hessenberg form, then single-shift
//! complex QR with Wilkinson shifts. Eigenvalues are certified afterwards by
//! inverse-iteration residuals.

mod reduce;
mod residual;

pub use reduce::{balance, hessenberg};
pub use residual::residuals;

use num_complex::Complex64;
use thiserror::Error;

use crate::matrix::ComplexDenseMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigError {
    #[error("NoConvergence: QR iteration limit reached with {deflated} of {dim} eigenvalues deflated")]
    NoConvergence { deflated: usize, dim: usize },
    #[error("SingularShift: inverse iteration failed at eigenvalue {eigenvalue}")]
    SingularShift { eigenvalue: Complex64 },
    #[error("matrix has non-finite entries")]
    NonFiniteInput,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigOptions {
    /// Aggregate QR iteration budget is `max_iter_per_dim * dim`.
    pub max_iter_per_dim: usize,
    /// Compute residuals after the eigenvalues.
    pub certify: bool,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self {
            max_iter_per_dim: 40,
            certify: true,
        }
    }
}

/// Eigenvalues of one matrix, sorted by real part then imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub dim: usize,
    pub eigenvalues: Vec<Complex64>,
    /// Relative residual per eigenvalue; empty when not certified.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub iterations: usize,
}

pub fn sort_eigenvalues(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

pub fn eig(m: &ComplexDenseMatrix, opts: &EigOptions) -> Result<Spectrum, EigError> {
    if !m.is_finite() {
        return Err(EigError::NonFiniteInput);
    }
    let (_, balanced) = balance(m);
    let h = reduce::hessenberg_only(&balanced);
    let (mut eigenvalues, iterations) = hessenberg_qr(h, opts.max_iter_per_dim * m.dim())?;
    sort_eigenvalues(&mut eigenvalues);
    let mut spectrum = Spectrum {
        dim: m.dim(),
        eigenvalues,
        residuals: Vec::new(),
        max_residual: 0.0,
        iterations,
    };
    if opts.certify {
        residuals(m, &mut spectrum)?;
    }
    Ok(spectrum)
}

/// `G = [[c, s], [−s̄, c]]` with `G·[f, g]ᵀ = [r, 0]ᵀ`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    if g == zero {
        return (1.0, zero, f);
    }
    let g_abs = g.norm();
    if f == zero {
        return (0.0, g.conj() / g_abs, Complex64::new(g_abs, 0.0));
    }
    let f_abs = f.norm();
    let norm = f_abs.hypot(g_abs);
    let phase = f / f_abs;
    (f_abs / norm, phase * g.conj() / norm, phase * norm)
}

fn rotate_rows(h: &mut ComplexDenseMatrix, k: usize, cols: std::ops::RangeInclusive<usize>, c: f64, s: Complex64) {
    for j in cols {
        let a = h[(k, j)];
        let b = h[(k + 1, j)];
        h[(k, j)] = a * c + s * b;
        h[(k + 1, j)] = -s.conj() * a + b * c;
    }
}

fn rotate_cols(h: &mut ComplexDenseMatrix, k: usize, rows: std::ops::RangeInclusive<usize>, c: f64, s: Complex64) {
    for i in rows {
        let a = h[(i, k)];
        let b = h[(i, k + 1)];
        h[(i, k)] = a * c + b * s.conj();
        h[(i, k + 1)] = -s * a + b * c;
    }
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let plus = p + disc;
    let minus = p - disc;
    let big = if plus.norm() >= minus.norm() { plus } else { minus };
    if big.norm() == 0.0 {
        return d;
    }
    d - bc / big
}

/// Shifted QR on an upper Hessenberg matrix. Only the active window is
/// updated since eigenvalues alone are wanted.
fn hessenberg_qr(mut h: ComplexDenseMatrix, max_iter: usize) -> Result<(Vec<Complex64>, usize), EigError> {
    let n = h.dim();
    let mut eigenvalues = vec![Complex64::new(0.0, 0.0); n];
    let eps = f64::EPSILON;
    let small = f64::MIN_POSITIVE * (n as f64 / eps);
    let h_norm = h.norm_fro();
    let mut total = 0;
    let mut since_deflation = 0;
    let mut end = n;

    while end > 0 {
        let last = end - 1;
        let mut lo = 0;
        for k in (1..=last).rev() {
            let sub = h[(k, k - 1)].norm();
            let mut local = h[(k - 1, k - 1)].norm() + h[(k, k)].norm();
            if local == 0.0 {
                local = h_norm;
            }
            if sub <= eps * local || sub <= small {
                h[(k, k - 1)] = Complex64::new(0.0, 0.0);
                lo = k;
                break;
            }
        }
        if lo == last {
            eigenvalues[last] = h[(last, last)];
            end -= 1;
            since_deflation = 0;
            continue;
        }
        if total >= max_iter {
            return Err(EigError::NoConvergence {
                deflated: n - end,
                dim: n,
            });
        }
        total += 1;
        since_deflation += 1;

        let shift = if since_deflation % 10 == 0 {
            h[(last, last)] + 0.75 * h[(last, last - 1)].re.abs()
        } else {
            wilkinson_shift(
                h[(last - 1, last - 1)],
                h[(last - 1, last)],
                h[(last, last - 1)],
                h[(last, last)],
            )
        };

        let (c, s, _) = givens(h[(lo, lo)] - shift, h[(lo + 1, lo)]);
        rotate_rows(&mut h, lo, lo..=last, c, s);
        rotate_cols(&mut h, lo, lo..=(lo + 2).min(last), c, s);
        for k in lo + 1..last {
            let (c, s, r) = givens(h[(k, k - 1)], h[(k + 1, k - 1)]);
            h[(k, k - 1)] = r;
            h[(k + 1, k - 1)] = Complex64::new(0.0, 0.0);
            rotate_rows(&mut h, k, k..=last, c, s);
            rotate_cols(&mut h, k, lo..=(k + 2).min(last), c, s);
        }
    }
    Ok((eigenvalues, total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_spectrum(got: &[Complex64], want: &[Complex64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).norm() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn diagonal_spectrum() {
        let m = ComplexDenseMatrix::from_diagonal(&[c(1.0, 0.0), c(2.0, 3.0), c(-5.0, 0.0)]);
        let s = eig(&m, &EigOptions::default()).unwrap();
        assert_spectrum(&s.eigenvalues, &[c(-5.0, 0.0), c(1.0, 0.0), c(2.0, 3.0)], 0.0);
        assert!(s.max_residual <= 1e-14);
    }

    #[test]
    fn rotation_generator() {
        let m = ComplexDenseMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(-1.0, 0.0), c(0.0, 0.0)]]);
        let s = eig(&m, &EigOptions::default()).unwrap();
        assert_spectrum(&s.eigenvalues, &[c(0.0, -1.0), c(0.0, 1.0)], 1e-15);
    }

    #[test]
    fn jordan_block_is_handled() {
        let m = ComplexDenseMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]);
        let s = eig(&m, &EigOptions::default()).unwrap();
        assert_spectrum(&s.eigenvalues, &[c(0.0, 0.0), c(0.0, 0.0)], 0.0);
        assert!(s.max_residual.is_finite() && s.max_residual <= 1e-7);
    }

    #[test]
    fn empty_and_scalar() {
        let s = eig(&ComplexDenseMatrix::zeros(0), &EigOptions::default()).unwrap();
        assert!(s.eigenvalues.is_empty());
        let s = eig(&ComplexDenseMatrix::from_diagonal(&[c(2.0, -1.0)]), &EigOptions::default()).unwrap();
        assert_eq!(s.eigenvalues, vec![c(2.0, -1.0)]);
    }

    #[test]
    fn companion_matrix_roots() {
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let m = ComplexDenseMatrix::from_rows(&[
            vec![c(6.0, 0.0), c(-11.0, 0.0), c(6.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let s = eig(&m, &EigOptions::default()).unwrap();
        assert_spectrum(&s.eigenvalues, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)], 1e-12);
    }

    #[test]
    fn iteration_cap_reports_partial_deflation() {
        let m = ComplexDenseMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(3.0, 0.0), c(4.0, 1.0), c(5.0, 0.0)],
            vec![c(0.0, 0.0), c(6.0, 0.0), c(7.0, 0.0)],
        ]);
        let opts = EigOptions { max_iter_per_dim: 0, certify: false };
        assert_eq!(eig(&m, &opts), Err(EigError::NoConvergence { deflated: 0, dim: 3 }));
    }

    #[test]
    fn non_finite_rejected() {
        let m = ComplexDenseMatrix::from_diagonal(&[c(f64::INFINITY, 0.0)]);
        assert_eq!(eig(&m, &EigOptions::default()), Err(EigError::NonFiniteInput));
    }

    #[test]
    fn wilkinson_shift_picks_nearest_root() {
        // eigenvalues of [[4, 1],[0, 1]] are 4 and 1; closest to d=1 is 1
        let s = wilkinson_shift(c(4.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!((s - c(1.0, 0.0)).norm() < 1e-15);
        let s = wilkinson_shift(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0));
        assert!((s.norm() - 1.0).abs() < 1e-15 && s.re.abs() < 1e-15);
    }
}
