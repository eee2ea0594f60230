//! Dense and power-iteration diagnostics for smoothers and cycles.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Smoother, SmootherConfig};
use crate::error::{Error, Result};
use crate::linalg::{dot, generalized_extremes};
use crate::sparse::CsrMatrix;

/// Power iteration for the `A`-norm of an operator that is self-adjoint in
/// the `A` inner product (so the norm equals its spectral radius).
pub fn a_norm_power(a: &CsrMatrix, op: impl Fn(&[f64]) -> Vec<f64>, iterations: usize, seed: u64) -> f64 {
    let n = a.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let a_norm = |x: &[f64]| dot(&a.mul_vec(x), x).max(0.0).sqrt();
    let nv = a_norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut est = 0.0;
    for _ in 0..iterations {
        let w = op(&v);
        let nw = a_norm(&w);
        if nw == 0.0 {
            return 0.0;
        }
        est = nw;
        v = w.into_iter().map(|x| x / nw).collect();
    }
    est
}

/// Matrix of the composite smoother: column `j` is the result of the
/// configured sweeps applied to `b = e_j` from `x = 0`. For one sweep this is
/// `R` (or `Rᵀ`); for `ν` sweeps it is `R_ν` with `I - R_ν A = (I - R A)^ν`.
pub fn dense_smoother(a: &CsrMatrix, smoother: &Smoother, transposed: bool) -> DMatrix<f64> {
    let n = a.nrows();
    let mut m = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let mut x = vec![0.0; n];
        smoother.smooth(a, &e, &mut x, transposed);
        m.set_column(j, &nalgebra::DVector::from_vec(x));
        e[j] = 0.0;
    }
    m
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmootherAssumptionReport {
    /// Extreme generalized eigenvalues of `(D_R, D)`, `D_R = R⁻¹ + R⁻ᵀ - A`.
    pub dr_over_d: (f64, f64),
    /// Largest off-diagonal `|D_R|` entry relative to `max D`.
    pub dr_offdiag: f64,
    /// Extreme generalized eigenvalues of `(R̃⁻¹, D)`,
    /// `R̃ = R + Rᵀ - Rᵀ A R`.
    pub rtilde_inv_over_d: (f64, f64),
}

/// Dense check of the smoother assumptions for a single sweep of `cfg`.
/// Only meant for small matrices.
pub fn verify_smoother_assumptions(a: &CsrMatrix, cfg: SmootherConfig) -> Result<SmootherAssumptionReport> {
    let single = SmootherConfig { sweeps: 1, ..cfg };
    let s = Smoother::new(a, single)?;
    let r = dense_smoother(a, &s, false);
    let ad = a.to_dense();
    let n = a.nrows();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(a.diagonal()));

    let r_inv = r.clone().try_inverse().ok_or(Error::NotPositiveDefinite { pivot: 0 })?;
    let dr = &r_inv + r_inv.transpose() - &ad;
    let dmax = d.diagonal().max();
    let mut off = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off = off.max(dr[(i, j)].abs());
            }
        }
    }
    let dr_sym = (&dr + dr.transpose()) * 0.5;

    let rt = &r + r.transpose() - r.transpose() * &ad * &r;
    let rt_inv = rt.try_inverse().ok_or(Error::NotPositiveDefinite { pivot: 0 })?;
    let rt_inv = (&rt_inv + rt_inv.transpose()) * 0.5;

    Ok(SmootherAssumptionReport {
        dr_over_d: generalized_extremes(&dr_sym, &d)?,
        dr_offdiag: off / dmax,
        rtilde_inv_over_d: generalized_extremes(&rt_inv, &d)?,
    })
}
