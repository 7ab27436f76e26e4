use num_complex::Complex64;

use crate::matrix::ComplexDenseMatrix;

const RADIX: f64 = 2.0;

/// Diagonal balancing by powers of two.
///
/// Returns the scaling `d` and `M' = D⁻¹ M D` with `D = diag(d)`. Off-diagonal
/// row and column norms of `M'` are equal to within a factor of the radix.
/// Scalings are exact in floating point, so the spectrum is unchanged.
pub fn balance(m: &ComplexDenseMatrix) -> (Vec<f64>, ComplexDenseMatrix) {
    let n = m.dim();
    let mut a = m.clone();
    let mut scale = vec![1.0; n];
    let radix2 = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].norm();
                    r += a[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= radix2;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= radix2;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                scale[i] *= f;
                let inv = Complex64::new(1.0 / f, 0.0);
                let fc = Complex64::new(f, 0.0);
                for j in 0..n {
                    a[(i, j)] *= inv;
                    a[(j, i)] *= fc;
                }
            }
        }
    }
    (scale, a)
}

/// Unitary reduction to upper Hessenberg form: returns `(H, Q)` with
/// `H = Qᴴ M Q` and every entry below the first subdiagonal exactly zero.
pub fn hessenberg(m: &ComplexDenseMatrix) -> (ComplexDenseMatrix, ComplexDenseMatrix) {
    let mut q = ComplexDenseMatrix::identity(m.dim());
    let h = reduce(m, Some(&mut q));
    (h, q)
}

pub(crate) fn hessenberg_only(m: &ComplexDenseMatrix) -> ComplexDenseMatrix {
    reduce(m, None)
}

// Householder reflectors P = I − 2uuᴴ/‖u‖², applied as A ← P A P.
fn reduce(m: &ComplexDenseMatrix, mut q: Option<&mut ComplexDenseMatrix>) -> ComplexDenseMatrix {
    let n = m.dim();
    let mut a = m.clone();
    let zero = Complex64::new(0.0, 0.0);
    for k in 0..n.saturating_sub(2) {
        let tail_norm: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>();
        if tail_norm == 0.0 {
            continue;
        }
        let mut u: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let alpha = (tail_norm + u[0].norm_sqr()).sqrt();
        let phase = if u[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            u[0] / u[0].norm()
        };
        u[0] += phase * alpha;
        let u_norm2: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / u_norm2;

        // left: rows k+1.., columns k+1..
        for j in k + 1..n {
            let dot: Complex64 = u
                .iter()
                .enumerate()
                .map(|(t, ui)| ui.conj() * a[(k + 1 + t, j)])
                .sum();
            let f = dot * beta;
            for (t, ui) in u.iter().enumerate() {
                a[(k + 1 + t, j)] -= ui * f;
            }
        }
        a[(k + 1, k)] = -phase * alpha;
        for i in k + 2..n {
            a[(i, k)] = zero;
        }

        apply_right(&mut a, &u, k + 1, beta);
        if let Some(q) = q.as_deref_mut() {
            apply_right(q, &u, k + 1, beta);
        }
    }
    a
}

// A ← A P on columns offset..offset+u.len()
fn apply_right(a: &mut ComplexDenseMatrix, u: &[Complex64], offset: usize, beta: f64) {
    for r in 0..a.dim() {
        let row = a.row_mut(r);
        let cols = &mut row[offset..offset + u.len()];
        let dot: Complex64 = cols.iter().zip(u).map(|(x, ui)| x * ui).sum();
        let f = dot * beta;
        for (x, ui) in cols.iter_mut().zip(u) {
            *x -= f * ui.conj();
        }
    }
}
