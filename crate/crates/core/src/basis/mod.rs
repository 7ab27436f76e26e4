//! Truncated harmonic-oscillator (Fock) representations of operator expressions.
//!
//! Convention: `x = (a + a†)/√2`, `p = i(a† − a)/√2`, so `p² + x² = 2a†a + 1`.
//!
//! Products and exponentials of truncated matrices are wrong near the
//! truncation edge. [`assemble`] therefore builds every term at a working
//! dimension `dim + pad` and only returns the leading `dim`×`dim` block.

mod displacement;
mod matexp;

pub use displacement::{displacement_element, laguerre};
pub use matexp::matexp;

use num_complex::Complex64;
use thiserror::Error;

pub use crate::matrix::ComplexDenseMatrix;
use crate::parser::{Factor, OperatorExpr};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("basis dimension must be at least 1")]
    InvalidDimension,
    #[error("matrix exponential tolerance {0} outside (0, 1e-6]")]
    InvalidTolerance(f64),
    #[error("matrix has non-finite entries")]
    NonFiniteInput,
    #[error("Overflow: matrix exponential exceeds the representable range")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisSpec {
    pub dim: usize,
    pub pad: usize,
}

impl BasisSpec {
    pub fn new(dim: usize, pad: usize) -> Result<Self, BasisError> {
        if dim == 0 {
            return Err(BasisError::InvalidDimension);
        }
        Ok(Self { dim, pad })
    }

    pub fn working_dim(&self) -> usize {
        self.dim + self.pad
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblyOptions {
    /// Relative accuracy target for each matrix exponential.
    pub matexp_tol: f64,
    /// Extra working dimensions used while composing factors.
    pub pad: usize,
}

pub const DEFAULT_MATEXP_TOL: f64 = 1e-13;
pub const DEFAULT_PAD: usize = 8;

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self {
            matexp_tol: DEFAULT_MATEXP_TOL,
            pad: DEFAULT_PAD,
        }
    }
}

impl AssemblyOptions {
    pub fn validate(&self) -> Result<(), BasisError> {
        if !(self.matexp_tol > 0.0 && self.matexp_tol <= 1e-6) {
            return Err(BasisError::InvalidTolerance(self.matexp_tol));
        }
        Ok(())
    }

    pub fn spec(&self, dim: usize) -> Result<BasisSpec, BasisError> {
        BasisSpec::new(dim, self.pad)
    }
}

/// Annihilation operator: `a|n⟩ = √n |n−1⟩`.
pub fn lowering(dim: usize) -> ComplexDenseMatrix {
    let mut a = ComplexDenseMatrix::zeros(dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn position(dim: usize) -> ComplexDenseMatrix {
    let mut x = ComplexDenseMatrix::zeros(dim);
    for m in 0..dim.saturating_sub(1) {
        let v = ((m + 1) as f64 / 2.0).sqrt();
        x[(m, m + 1)] = Complex64::new(v, 0.0);
        x[(m + 1, m)] = Complex64::new(v, 0.0);
    }
    x
}

pub fn momentum(dim: usize) -> ComplexDenseMatrix {
    let mut p = ComplexDenseMatrix::zeros(dim);
    for m in 0..dim.saturating_sub(1) {
        let v = ((m + 1) as f64 / 2.0).sqrt();
        p[(m, m + 1)] = Complex64::new(0.0, -v);
        p[(m + 1, m)] = Complex64::new(0.0, v);
    }
    p
}

/// Truncated matrix of `expr` in the oscillator basis.
///
/// Each term's word is multiplied out in written order at the working
/// dimension; `exp(body)` factors are the matrix exponential of `body`
/// assembled at that same dimension with no further padding. The weighted
/// sum is cut down to `spec.dim` at the end.
pub fn assemble(
    expr: &OperatorExpr,
    spec: BasisSpec,
    opts: &AssemblyOptions,
) -> Result<ComplexDenseMatrix, BasisError> {
    if spec.dim == 0 {
        return Err(BasisError::InvalidDimension);
    }
    opts.validate()?;
    let work = Workspace::new(spec.working_dim());
    let full = work.assemble(expr, opts.matexp_tol)?;
    if !full.is_finite() {
        return Err(BasisError::Overflow);
    }
    Ok(full.top_left(spec.dim))
}

struct Workspace {
    dim: usize,
    x: ComplexDenseMatrix,
    p: ComplexDenseMatrix,
}

impl Workspace {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            x: position(dim),
            p: momentum(dim),
        }
    }

    fn assemble(&self, expr: &OperatorExpr, tol: f64) -> Result<ComplexDenseMatrix, BasisError> {
        let mut sum = ComplexDenseMatrix::zeros(self.dim);
        for term in &expr.terms {
            if term.word.is_empty() {
                for k in 0..self.dim {
                    sum[(k, k)] += term.coeff;
                }
                continue;
            }
            let mut acc: Option<ComplexDenseMatrix> = None;
            for factor in &term.word {
                let exp_storage;
                let f = match factor {
                    Factor::X => &self.x,
                    Factor::P => &self.p,
                    Factor::Exp(body) => {
                        exp_storage = matexp(&self.assemble(body, tol)?, tol)?;
                        &exp_storage
                    }
                };
                acc = Some(match acc {
                    None => f.clone(),
                    Some(a) => a.matmul(f),
                });
            }
            if let Some(product) = acc {
                sum.add_scaled(term.coeff, &product);
            }
        }
        Ok(sum)
    }
}
