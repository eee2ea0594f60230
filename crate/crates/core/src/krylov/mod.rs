//! Conjugate gradients, the stationary two-level iteration and condition
//! number estimates.
//!
//! Every solver starts from the zero vector and stops once
//! `‖r_k‖ <= tol · ‖b‖`. The reported convergence factor is
//! `ρ = (‖r_n‖ / ‖r_0‖)^{1/n}`.

mod lanczos;

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm2};
use crate::sparse::CsrMatrix;
use crate::twolevel::TwoLevelPreconditioner;

pub use lanczos::{condition_number, lanczos_extremes, tridiagonal_extremes, DENSE_EIGEN_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingRule {
    pub rel_tol: f64,
    pub max_iterations: usize,
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            max_iterations: 10_000,
        }
    }
}

impl StoppingRule {
    pub fn new(rel_tol: f64, max_iterations: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {rel_tol}")));
        }
        Ok(Self {
            rel_tol,
            max_iterations,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// `‖r_k‖` for `k = 0..=iterations`.
    pub residual_history: Vec<f64>,
    pub converged: bool,
    /// Set by the stationary iteration after ten consecutive residual
    /// increases.
    pub diverged: bool,
    pub rho: f64,
    pub cond_estimate: Option<f64>,
    pub wall_time: Duration,
}

/// `(‖r_n‖ / ‖r_0‖)^{1/n}`; zero for an empty or immediately solved history.
pub fn convergence_factor(history: &[f64]) -> f64 {
    let n = history.len().saturating_sub(1);
    if n == 0 || history[0] == 0.0 {
        return 0.0;
    }
    (history[n] / history[0]).powf(1.0 / n as f64)
}

/// `log₂(κ_ℓ / κ_{ℓ-1})` for consecutive levels.
pub fn condition_rate(cond_per_level: &[f64]) -> Result<Vec<f64>> {
    if cond_per_level.len() < 2 {
        return Err(Error::InvalidArgument("a rate needs at least two levels".into()));
    }
    if let Some(c) = cond_per_level.iter().find(|c| !(**c > 0.0)) {
        return Err(Error::InvalidArgument(format!("condition numbers must be positive, got {c}")));
    }
    Ok(cond_per_level.windows(2).map(|w| (w[1] / w[0]).log2()).collect())
}

pub trait Preconditioner {
    fn apply(&self, r: &[f64]) -> Vec<f64>;
}

pub struct IdentityPreconditioner;

impl Preconditioner for IdentityPreconditioner {
    fn apply(&self, r: &[f64]) -> Vec<f64> {
        r.to_vec()
    }
}

impl Preconditioner for TwoLevelPreconditioner {
    fn apply(&self, r: &[f64]) -> Vec<f64> {
        TwoLevelPreconditioner::apply(self, r)
    }
}

impl<F: Fn(&[f64]) -> Vec<f64>> Preconditioner for F {
    fn apply(&self, r: &[f64]) -> Vec<f64> {
        self(r)
    }
}

pub fn cg(a: &CsrMatrix, b: &[f64], stop: StoppingRule) -> (Vec<f64>, SolveReport) {
    pcg(a, &IdentityPreconditioner, b, stop)
}

/// Preconditioned CG. The condition estimate is the ratio of the extreme
/// eigenvalues of the Lanczos matrix assembled from the CG coefficients:
/// `T_jj = 1/α_j + β_{j-1}/α_{j-1}`, `T_{j,j+1} = √β_j / α_j`.
pub fn pcg<M: Preconditioner + ?Sized>(a: &CsrMatrix, m: &M, b: &[f64], stop: StoppingRule) -> (Vec<f64>, SolveReport) {
    let start = Instant::now();
    let n = b.len();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let bnorm = norm2(b);
    let mut history = vec![bnorm];
    let target = stop.rel_tol * bnorm;

    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut converged = bnorm <= target;
    let mut z = m.apply(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];

    while !converged && alphas.len() < stop.max_iterations {
        a.mul_vec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) || !(rz > 0.0) {
            break;
        }
        let alpha = rz / pap;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &ap, &mut r);
        alphas.push(alpha);
        let rn = norm2(&r);
        history.push(rn);
        if rn <= target {
            converged = true;
            break;
        }
        z = m.apply(&r);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        betas.push(beta);
        rz = rz_new;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
    }

    let cond_estimate = cg_lanczos_condition(&alphas, &betas);
    let iterations = history.len() - 1;
    let report = SolveReport {
        iterations,
        rho: convergence_factor(&history),
        residual_history: history,
        converged,
        diverged: false,
        cond_estimate,
        wall_time: start.elapsed(),
    };
    (x, report)
}

fn cg_lanczos_condition(alphas: &[f64], betas: &[f64]) -> Option<f64> {
    let k = alphas.len();
    if k == 0 {
        return None;
    }
    let diag: Vec<f64> = (0..k)
        .map(|j| 1.0 / alphas[j] + if j > 0 { betas[j - 1] / alphas[j - 1] } else { 0.0 })
        .collect();
    let off: Vec<f64> = (0..k - 1).map(|j| betas[j].sqrt() / alphas[j]).collect();
    let (lo, hi) = tridiagonal_extremes(&diag, &off);
    (lo > 0.0).then(|| hi / lo)
}

/// Repeat the two-level cycle from zero until the stopping rule fires.
pub fn stationary_two_level(
    a: &CsrMatrix,
    cycle: &TwoLevelPreconditioner,
    b: &[f64],
    stop: StoppingRule,
) -> (Vec<f64>, SolveReport) {
    let start = Instant::now();
    let mut x = vec![0.0; b.len()];
    let bnorm = norm2(b);
    let target = stop.rel_tol * bnorm;
    let mut history = vec![bnorm];
    let mut converged = bnorm <= target;
    let mut diverged = false;
    let mut increases = 0;

    while !converged && history.len() <= stop.max_iterations {
        x = cycle.cycle(b, &x);
        let rn = norm2(&a.residual(b, &x));
        let prev = *history.last().unwrap();
        history.push(rn);
        if rn <= target {
            converged = true;
        } else if rn > prev || !rn.is_finite() {
            increases += 1;
            if increases >= 10 || !rn.is_finite() {
                diverged = true;
                break;
            }
        } else {
            increases = 0;
        }
    }

    let report = SolveReport {
        iterations: history.len() - 1,
        rho: convergence_factor(&history),
        residual_history: history,
        converged,
        diverged,
        cond_estimate: None,
        wall_time: start.elapsed(),
    };
    (x, report)
}
