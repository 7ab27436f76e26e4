use num_complex::Complex64;

use super::{reduce, EigError, Spectrum};
use crate::matrix::ComplexDenseMatrix;

const INVERSE_STEPS: usize = 3;

/// Relative residual `‖Mv − λv‖ / (‖M‖·‖v‖)` for every eigenvalue in
/// `spectrum`, with `v` from inverse iteration. Stores the per-eigenvalue
/// list and its maximum in `spectrum`.
///
/// The iteration runs on the unitarily similar Hessenberg form `QᴴMQ`, which
/// leaves residual norms unchanged and makes each solve O(n²).
pub fn residuals(m: &ComplexDenseMatrix, spectrum: &mut Spectrum) -> Result<Vec<f64>, EigError> {
    let n = m.dim();
    let norm = m.norm_fro();
    let out: Vec<f64> = if norm == 0.0 {
        vec![0.0; spectrum.eigenvalues.len()]
    } else {
        let h = reduce::hessenberg_only(m);
        spectrum
            .eigenvalues
            .iter()
            .map(|&lambda| certify_one(&h, lambda, norm))
            .collect::<Result<_, _>>()?
    };
    debug_assert_eq!(out.len(), n);
    spectrum.max_residual = out.iter().copied().fold(0.0, f64::max);
    spectrum.residuals = out.clone();
    Ok(out)
}

fn certify_one(h: &ComplexDenseMatrix, lambda: Complex64, norm: f64) -> Result<f64, EigError> {
    let lu = match HessenbergLu::factor(h, lambda) {
        Some(lu) => lu,
        None => {
            let nudged = lambda + f64::EPSILON * norm;
            HessenbergLu::factor(h, nudged).ok_or(EigError::SingularShift { eigenvalue: lambda })?
        }
    };
    let n = h.dim();
    let mut v: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(1.0 + k as f64 / n as f64, 0.0))
        .collect();
    normalize(&mut v);
    for _ in 0..INVERSE_STEPS {
        lu.solve(&mut v);
        if !normalize(&mut v) {
            return Err(EigError::SingularShift { eigenvalue: lambda });
        }
    }
    let hv = h.matvec(&v);
    let r: f64 = hv
        .iter()
        .zip(&v)
        .map(|(a, b)| (a - lambda * b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(r / norm)
}

fn normalize(v: &mut [Complex64]) -> bool {
    let s = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(s.is_finite() && s > 0.0) {
        return false;
    }
    v.iter_mut().for_each(|z| *z /= s);
    true
}

/// LU with partial pivoting of `H − λI` for upper Hessenberg `H`; only
/// adjacent rows are ever swapped.
struct HessenbergLu {
    u: ComplexDenseMatrix,
    multipliers: Vec<Complex64>,
    swapped: Vec<bool>,
}

impl HessenbergLu {
    fn factor(h: &ComplexDenseMatrix, shift: Complex64) -> Option<Self> {
        let n = h.dim();
        let mut u = h.clone();
        for k in 0..n {
            u[(k, k)] -= shift;
        }
        let mut multipliers = vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for k in 0..n.saturating_sub(1) {
            if u[(k + 1, k)].norm() > u[(k, k)].norm() {
                for j in k..n {
                    let t = u[(k, j)];
                    u[(k, j)] = u[(k + 1, j)];
                    u[(k + 1, j)] = t;
                }
                swapped[k] = true;
            }
            let pivot = u[(k, k)];
            if pivot.norm() == 0.0 {
                return None;
            }
            let l = u[(k + 1, k)] / pivot;
            multipliers[k] = l;
            u[(k + 1, k)] = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                let t = u[(k, j)];
                u[(k + 1, j)] -= l * t;
            }
        }
        if n > 0 && u[(n - 1, n - 1)].norm() == 0.0 {
            return None;
        }
        Some(Self { u, multipliers, swapped })
    }

    fn solve(&self, b: &mut [Complex64]) {
        let n = b.len();
        for k in 0..n.saturating_sub(1) {
            if self.swapped[k] {
                b.swap(k, k + 1);
            }
            let t = b[k];
            b[k + 1] -= self.multipliers[k] * t;
        }
        for k in (0..n).rev() {
            let row = self.u.row(k);
            let s: Complex64 = (k + 1..n).map(|j| row[j] * b[j]).sum();
            b[k] = (b[k] - s) / row[k];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hessenberg_lu_solves() {
        let h = ComplexDenseMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 1.0), c(0.0, 1.0)],
            vec![c(3.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.5, -2.0), c(2.0, 0.0)],
        ]);
        let shift = c(0.25, 0.5);
        let x = vec![c(1.0, -1.0), c(0.5, 2.0), c(-3.0, 0.0)];
        let mut shifted = h.clone();
        for k in 0..3 {
            shifted[(k, k)] -= shift;
        }
        let mut b = shifted.matvec(&x);
        HessenbergLu::factor(&h, shift).unwrap().solve(&mut b);
        for (a, e) in b.iter().zip(&x) {
            assert!((a - e).norm() < 1e-13);
        }
    }

    #[test]
    fn exact_eigenvalue_is_nudged() {
        let m = ComplexDenseMatrix::from_diagonal(&[c(1.0, 0.0), c(3.0, 0.0)]);
        let mut s = Spectrum {
            dim: 2,
            eigenvalues: vec![c(1.0, 0.0), c(3.0, 0.0)],
            residuals: vec![],
            max_residual: 0.0,
            iterations: 0,
        };
        let r = residuals(&m, &mut s).unwrap();
        assert!(r.iter().all(|&x| x <= 1e-14));
        assert_eq!(s.residuals, r);
    }

    #[test]
    fn wrong_eigenvalue_has_large_residual() {
        let m = ComplexDenseMatrix::from_diagonal(&[c(1.0, 0.0), c(3.0, 0.0)]);
        let mut s = Spectrum {
            dim: 2,
            eigenvalues: vec![c(1.0, 0.0), c(2.0, 0.0)],
            residuals: vec![],
            max_residual: 0.0,
            iterations: 0,
        };
        residuals(&m, &mut s).unwrap();
        assert!(s.max_residual > 0.1);
    }
}
