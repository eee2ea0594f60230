use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{axpy, dot, norm2, symmetric_extremes};
use crate::sparse::CsrMatrix;

/// Below this many rows condition numbers are computed by a dense symmetric
/// eigensolver.
pub const DENSE_EIGEN_LIMIT: usize = 500;

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`
/// (Sturm count from the signs of the `LDLᵀ` pivots).
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let o2 = if i > 0 { off[i - 1] * off[i - 1] } else { 0.0 };
        q = diag[i] - x - if i > 0 { o2 / q } else { 0.0 };
        if q == 0.0 {
            q = f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest and largest eigenvalue of the symmetric tridiagonal matrix with
/// diagonal `diag` and off-diagonal `off`, by bisection on Sturm counts.
pub fn tridiagonal_extremes(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    assert!(n > 0 && off.len() + 1 == n);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let pad = 1e-14 * lo.abs().max(hi.abs());
    let (lo, hi) = (lo - pad, hi + pad);
    let bisect = |k: usize| {
        // smallest x with more than k eigenvalues below it
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(diag, off, mid) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        0.5 * (a + b)
    };
    (bisect(0), bisect(n - 1))
}

/// Extreme eigenvalues of a symmetric operator by Lanczos with full
/// reorthogonalization from a seeded random start. Stops when both Ritz
/// extremes move by less than `tol` (relative) over ten steps, after
/// `max_steps`, or on an invariant subspace.
pub fn lanczos_extremes(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    n: usize,
    max_steps: usize,
    tol: f64,
    seed: u64,
) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let nq = norm2(&q);
    q.iter_mut().for_each(|x| *x /= nq);

    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut last = (f64::NAN, f64::NAN);
    let steps = max_steps.min(n).max(1);

    for j in 0..steps {
        let mut w = apply(&q);
        let a = dot(&q, &w);
        alpha.push(a);
        basis.push(q);
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                axpy(-c, v, &mut w);
            }
        }
        let b = norm2(&w);
        let done = j + 1 == steps || b <= 1e-13 * a.abs().max(1.0);
        if (j + 1) % 10 == 0 || done {
            let ext = tridiagonal_extremes(&alpha, &beta);
            // written so that the NaN of the first check counts as movement
            let moved = |x: f64, y: f64| !((x - y).abs() <= tol * y.abs());
            let stable = !moved(last.0, ext.0) && !moved(last.1, ext.1);
            last = ext;
            if done || stable {
                return ext;
            }
        }
        beta.push(b);
        q = w.into_iter().map(|x| x / b).collect();
    }
    last
}

/// Spectral condition number of a symmetric positive definite matrix: dense
/// below [`DENSE_EIGEN_LIMIT`] rows, Lanczos otherwise.
pub fn condition_number(a: &CsrMatrix) -> f64 {
    let (lo, hi) = if a.nrows() < DENSE_EIGEN_LIMIT {
        symmetric_extremes(&a.to_dense())
    } else {
        lanczos_extremes(|v| a.mul_vec(v), a.nrows(), 2000, 1e-9, 0x5eed)
    };
    hi / lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_matches_closed_form() {
        // tridiag(-1, 2, -1): eigenvalues 2 - 2 cos(kπ/(n+1))
        let n = 50;
        let (lo, hi) = tridiagonal_extremes(&vec![2.0; n], &vec![-1.0; n - 1]);
        let t = std::f64::consts::PI / (n as f64 + 1.0);
        assert!((lo - (2.0 - 2.0 * t.cos())).abs() < 1e-13);
        assert!((hi - (2.0 + 2.0 * t.cos())).abs() < 1e-13);
    }

    #[test]
    fn single_entry() {
        let (lo, hi) = tridiagonal_extremes(&[3.0], &[]);
        assert!((lo - 3.0).abs() < 1e-13 && (hi - 3.0).abs() < 1e-13);
    }

    #[test]
    fn lanczos_matches_dense() {
        let n = 300;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 + (i % 7) as f64 * 0.1));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t);
        let (lo, hi) = lanczos_extremes(|v| a.mul_vec(v), n, n, 1e-12, 3);
        let (dlo, dhi) = symmetric_extremes(&a.to_dense());
        assert!((lo - dlo).abs() < 1e-8 * dhi);
        assert!((hi - dhi).abs() < 1e-8 * dhi);
    }
}
