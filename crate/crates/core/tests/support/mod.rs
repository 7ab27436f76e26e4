//! Test-only oracles, deliberately independent of the library's matrix code.
#![allow(dead_code)]

use mdm_spectra::matrix::ComplexDenseMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_matrix(n: usize, seed: u64) -> ComplexDenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexDenseMatrix::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_real_matrix(n: usize, seed: u64) -> ComplexDenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexDenseMatrix::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), 0.0))
}

fn to_rows(m: &ComplexDenseMatrix) -> Vec<Vec<Complex64>> {
    (0..m.dim()).map(|r| m.row(r).to_vec()).collect()
}

fn naive_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// Characteristic polynomial coefficients by Faddeev–LeVerrier, lowest
/// degree first: `det(λI − A) = Σ coeffs[k] λ^k` with `coeffs[n] = 1`.
pub fn faddeev_leverrier(m: &ComplexDenseMatrix) -> Vec<Complex64> {
    let a = to_rows(m);
    let n = a.len();
    let mut coeffs = vec![c(0.0, 0.0); n + 1];
    coeffs[n] = c(1.0, 0.0);
    let mut mk = vec![vec![c(0.0, 0.0); n]; n];
    for k in 1..=n {
        let mut next = naive_mul(&a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += coeffs[n - k + 1];
        }
        mk = next;
        let am = naive_mul(&a, &mk);
        let trace: Complex64 = (0..n).map(|i| am[i][i]).sum();
        coeffs[n - k] = -trace / k as f64;
    }
    coeffs
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = c(0.0, 0.0);
    let mut dp = c(0.0, 0.0);
    for a in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All roots of a monic polynomial (lowest degree first) by Durand–Kerner
/// (Weierstrass) iteration followed by a few Newton polishing steps.
pub fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let radius = 1.0 + coeffs[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = c(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius / 2.0).collect();
    for _ in 0..10_000 {
        let mut change: f64 = 0.0;
        for k in 0..n {
            let zk = roots[k];
            let denom: Complex64 = (0..n).filter(|&j| j != k).map(|j| zk - roots[j]).product();
            let step = horner(coeffs, zk).0 / denom;
            roots[k] = zk - step;
            change = change.max(step.norm());
        }
        if change <= 1e-15 * radius {
            break;
        }
    }
    for z in &mut roots {
        for _ in 0..3 {
            let (p, dp) = horner(coeffs, *z);
            if dp.norm() == 0.0 {
                break;
            }
            *z -= p / dp;
        }
    }
    roots
}

pub fn oracle_eigenvalues(m: &ComplexDenseMatrix) -> Vec<Complex64> {
    durand_kerner(&faddeev_leverrier(m))
}

/// Largest distance after greedily pairing each element of `a` with its
/// nearest unused element of `b`, closest pairs first.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for (d, i, j) in pairs {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Largest distance between each value and the nearest conjugate of another
/// value in the same multiset.
pub fn conjugation_defect(values: &[Complex64]) -> f64 {
    let conj: Vec<Complex64> = values.iter().map(|z| z.conj()).collect();
    multiset_distance(values, &conj)
}

/// `(−1)^(m+n) conj(M[m][n]) = M[m][n]`, the finite PT condition with
/// parity `diag((−1)^n)`.
pub fn pt_defect(m: &ComplexDenseMatrix) -> f64 {
    let n = m.dim();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for col in 0..n {
            let sign = if (r + col) % 2 == 0 { 1.0 } else { -1.0 };
            worst = worst.max((m[(r, col)].conj() * sign - m[(r, col)]).norm());
        }
    }
    worst
}

pub fn max_imag_entry(m: &ComplexDenseMatrix) -> f64 {
    m.as_slice().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}
