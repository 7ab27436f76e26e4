use num_complex::Complex64;

use super::BasisError;
use crate::matrix::ComplexDenseMatrix;

const MAX_TAYLOR_DEGREE: usize = 60;

/// Matrix exponential by scaling and squaring.
///
/// `m` is scaled by `2^-s` so its 1-norm is at most 1/2, the Taylor series is
/// summed until the remainder bound `‖B‖^(q+1)/(q+1)! · 1/(1 − ‖B‖/(q+2))`
/// drops below `tol·e^(−‖B‖)` (a lower bound on `‖exp(B)‖`), and the result
/// is squared `s` times.
pub fn matexp(m: &ComplexDenseMatrix, tol: f64) -> Result<ComplexDenseMatrix, BasisError> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(BasisError::InvalidTolerance(tol));
    }
    if !m.is_finite() {
        return Err(BasisError::NonFiniteInput);
    }
    let n = m.dim();
    let norm = m.norm_one();
    if norm == 0.0 {
        return Ok(ComplexDenseMatrix::identity(n));
    }

    let squarings = (norm / 0.5).log2().ceil().max(0.0) as i32;
    let factor = 2f64.powi(-squarings);
    if factor == 0.0 {
        return Err(BasisError::Overflow);
    }
    let b = m.scale(Complex64::new(factor, 0.0));
    let b_norm = norm * factor;

    let target = tol * (-b_norm).exp();
    let mut sum = ComplexDenseMatrix::identity(n);
    let mut term = ComplexDenseMatrix::identity(n);
    let mut bound = 1.0;
    for k in 1..=MAX_TAYLOR_DEGREE {
        // b^k / k!, with b on the left so a sparse b keeps the product cheap
        term = b.matmul(&term).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum.add_scaled(Complex64::new(1.0, 0.0), &term);
        bound *= b_norm / k as f64;
        let next = bound * b_norm / (k + 1) as f64;
        let tail = next / (1.0 - b_norm / (k + 2) as f64);
        if tail <= target {
            break;
        }
    }

    for _ in 0..squarings {
        sum = sum.matmul(&sum);
        if !sum.is_finite() {
            return Err(BasisError::Overflow);
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{displacement_element, position};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_maps_to_identity_exactly() {
        let e = matexp(&ComplexDenseMatrix::zeros(4), 1e-13).unwrap();
        assert_eq!(e, ComplexDenseMatrix::identity(4));
    }

    #[test]
    fn diagonal_input() {
        let d = [c(0.3, 0.0), c(-2.0, 1.0), c(0.0, 3.5), c(4.0, -0.25)];
        let e = matexp(&ComplexDenseMatrix::from_diagonal(&d), 1e-13).unwrap();
        for (k, z) in d.iter().enumerate() {
            let want = z.exp();
            assert!((e[(k, k)] - want).norm() <= 1e-13 * want.norm().max(1.0) * 4.0);
        }
        for r in 0..4 {
            for col in 0..4 {
                if r != col {
                    assert_eq!(e[(r, col)], c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn nilpotent_input_is_exact_polynomial() {
        // exp([[0, a],[0, 0]]) = [[1, a],[0, 1]]
        let m = ComplexDenseMatrix::from_rows(&[vec![c(0.0, 0.0), c(3.0, -1.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]);
        let e = matexp(&m, 1e-13).unwrap();
        assert!((e[(0, 1)] - c(3.0, -1.0)).norm() < 1e-12);
        assert!((e[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn inverse_pair_multiplies_to_identity() {
        let a = position(64).scale(c(0.0, 1.0));
        let e = matexp(&a, 1e-13).unwrap();
        let f = matexp(&a.scale(c(-1.0, 0.0)), 1e-13).unwrap();
        let prod = e.matmul(&f);
        assert!(prod.max_abs_diff(&ComplexDenseMatrix::identity(64)) <= 1e-9);
    }

    #[test]
    fn displacement_block() {
        let e = matexp(&position(128).scale(c(0.0, 1.0)), 1e-13).unwrap();
        let mut worst = 0.0f64;
        for m in 0..32 {
            for n in 0..32 {
                worst = worst.max((e[(m, n)] - displacement_element(1.0, m, n)).norm());
            }
        }
        assert!(worst <= 1e-10, "max deviation {worst:e}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let m = ComplexDenseMatrix::identity(2);
        assert_eq!(matexp(&m, 0.0), Err(BasisError::InvalidTolerance(0.0)));
        let bad = ComplexDenseMatrix::from_diagonal(&[c(f64::NAN, 0.0)]);
        assert_eq!(matexp(&bad, 1e-13), Err(BasisError::NonFiniteInput));
        let big = ComplexDenseMatrix::from_diagonal(&[c(1e4, 0.0), c(0.0, 0.0)]);
        assert_eq!(matexp(&big, 1e-13), Err(BasisError::Overflow));
    }
}
