use num_complex::Complex64;

/// Associated Laguerre polynomial `L_n^(alpha)(x)` by upward recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Closed form of `⟨m| exp(i k x) |n⟩`.
///
/// `exp(ikx)` is the displacement `exp(α a† − ᾱ a)` with `α = ik/√2`.
pub fn displacement_element(k: f64, m: usize, n: usize) -> Complex64 {
    let alpha = Complex64::new(0.0, k / std::f64::consts::SQRT_2);
    let a2 = alpha.norm_sqr();
    let gauss = (-a2 / 2.0).exp();
    let (lo, hi, step) = if m >= n {
        (n, m, alpha)
    } else {
        (m, n, -alpha.conj())
    };
    // sqrt(lo!/hi!) * step^(hi-lo), accumulated factor by factor
    let mut prefactor = Complex64::new(1.0, 0.0);
    for j in lo + 1..=hi {
        prefactor *= step / (j as f64).sqrt();
    }
    prefactor * gauss * laguerre(lo, (hi - lo) as f64, a2)
}
