//! Two-level cycle on a fine mesh and its refinement parent.
//!
//! One cycle for `A u = f` from `x0`:
//!
//! 1. `v = x0 + Rᵀ (f - A x0)` (ν sweeps)
//! 2. `e_c = B_c⁻¹ Pᵀ (f - A v)`, `w = v + P e_c`
//! 3. `u = w + R (f - A w)` (ν sweeps)
//!
//! Pre- and post-smoothing are transposes of each other, so the cycle started
//! from zero is a symmetric positive definite preconditioner `B⁻¹`, and the
//! error propagator `E = (I - RA)(I - P B_c⁻¹ Pᵀ A)(I - RᵀA)` is self-adjoint
//! in the `A` inner product.

mod analysis;
mod coarse;
mod prolongation;
mod smoother;

use crate::error::{Error, Result};
use crate::factor::SkylineCholesky;
use crate::linalg::axpy;
use crate::sparse::CsrMatrix;

pub use analysis::{
    a_norm_power, dense_smoother, verify_smoother_assumptions, SmootherAssumptionReport,
};
pub use coarse::{averaged_coarse_weights, build_coarse, CoarseOperatorKind};
pub use prolongation::{build_prolongation, coarse_edge_halves, interpolate_to_coarse};
pub use smoother::{smooth, Smoother, SmootherConfig, SmootherKind};

#[derive(Debug, Clone)]
pub struct TwoLevelPreconditioner {
    a: CsrMatrix,
    p: CsrMatrix,
    pt: CsrMatrix,
    coarse: CsrMatrix,
    factor: SkylineCholesky,
    smoother: Smoother,
}

impl TwoLevelPreconditioner {
    /// `a` is the fine operator, `p` the prolongation (fine x coarse) and
    /// `coarse` the coarse operator, factored here once.
    pub fn new(a: CsrMatrix, p: CsrMatrix, coarse: CsrMatrix, cfg: SmootherConfig) -> Result<Self> {
        if p.nrows() != a.nrows() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                actual: p.nrows(),
            });
        }
        if coarse.nrows() != p.ncols() {
            return Err(Error::DimensionMismatch {
                expected: p.ncols(),
                actual: coarse.nrows(),
            });
        }
        let smoother = Smoother::new(&a, cfg)?;
        let factor = SkylineCholesky::factor(&coarse)?;
        let pt = p.transpose();
        Ok(Self {
            a,
            p,
            pt,
            coarse,
            factor,
            smoother,
        })
    }

    pub fn fine_operator(&self) -> &CsrMatrix {
        &self.a
    }

    pub fn prolongation(&self) -> &CsrMatrix {
        &self.p
    }

    pub fn coarse_operator(&self) -> &CsrMatrix {
        &self.coarse
    }

    pub fn smoother(&self) -> &Smoother {
        &self.smoother
    }

    pub fn coarse_nnz(&self) -> usize {
        self.coarse.nnz()
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `e_c = B_c⁻¹ Pᵀ r`, in coarse coordinates.
    pub fn coarse_solve(&self, r: &[f64]) -> Vec<f64> {
        self.factor.solve(&self.pt.mul_vec(r))
    }

    /// One two-level cycle for `A u = rhs` starting from `x0`.
    pub fn cycle(&self, rhs: &[f64], x0: &[f64]) -> Vec<f64> {
        let mut x = x0.to_vec();
        self.smoother.smooth(&self.a, rhs, &mut x, true);
        let r = self.a.residual(rhs, &x);
        let ec = self.coarse_solve(&r);
        axpy(1.0, &self.p.mul_vec(&ec), &mut x);
        self.smoother.smooth(&self.a, rhs, &mut x, false);
        x
    }

    /// `B⁻¹ r`: one cycle from the zero vector.
    pub fn apply(&self, r: &[f64]) -> Vec<f64> {
        self.cycle(r, &vec![0.0; r.len()])
    }

    /// `E v`: one cycle for the homogeneous system started at `v`.
    pub fn error_propagate(&self, v: &[f64]) -> Vec<f64> {
        self.cycle(&vec![0.0; v.len()], v)
    }
}
