use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmootherKind {
    /// Forward Gauss-Seidel, `R = (D + L)⁻¹`; its transpose is the backward
    /// sweep.
    GaussSeidel,
    /// `R = θ D⁻¹`.
    DampedJacobi,
    /// `R = ω (D + ω L)⁻¹`.
    Sor,
}

impl SmootherKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SmootherKind::GaussSeidel => "gs",
            SmootherKind::DampedJacobi => "jacobi",
            SmootherKind::Sor => "sor",
        }
    }
}

impl fmt::Display for SmootherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SmootherKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gs" | "gauss-seidel" => Ok(SmootherKind::GaussSeidel),
            "jacobi" => Ok(SmootherKind::DampedJacobi),
            "sor" => Ok(SmootherKind::Sor),
            other => Err(Error::InvalidArgument(format!("unknown smoother `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmootherConfig {
    pub kind: SmootherKind,
    /// Sweeps `ν` per smoothing step.
    pub sweeps: usize,
    /// SOR relaxation, in `(0, 2)`.
    pub omega: f64,
    /// Jacobi damping; `None` picks `1 / max_i Σ_j |a_ij| / a_ii`, which
    /// keeps `ρ(RA) < 1` by Gershgorin.
    pub jacobi_damping: Option<f64>,
}

impl SmootherConfig {
    pub fn gauss_seidel(sweeps: usize) -> Self {
        Self {
            kind: SmootherKind::GaussSeidel,
            sweeps,
            omega: 1.0,
            jacobi_damping: None,
        }
    }

    pub fn sor(omega: f64, sweeps: usize) -> Self {
        Self {
            kind: SmootherKind::Sor,
            omega,
            ..Self::gauss_seidel(sweeps)
        }
    }

    pub fn jacobi(sweeps: usize) -> Self {
        Self {
            kind: SmootherKind::DampedJacobi,
            ..Self::gauss_seidel(sweeps)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 {
            return Err(Error::InvalidArgument("smoothing needs at least one sweep".into()));
        }
        if self.kind == SmootherKind::Sor && !(self.omega > 0.0 && self.omega < 2.0) {
            return Err(Error::InvalidArgument(format!("SOR needs omega in (0, 2), got {}", self.omega)));
        }
        if let Some(t) = self.jacobi_damping {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidArgument(format!("Jacobi damping must be positive, got {t}")));
            }
        }
        Ok(())
    }
}

impl Default for SmootherConfig {
    fn default() -> Self {
        Self::gauss_seidel(2)
    }
}

/// A smoother bound to one matrix.
#[derive(Debug, Clone)]
pub struct Smoother {
    cfg: SmootherConfig,
    diag: Vec<f64>,
    /// Relaxation applied in the sweep: ω for SOR, 1 for Gauss-Seidel, θ
    /// for Jacobi.
    relax: f64,
}

impl Smoother {
    pub fn new(a: &CsrMatrix, cfg: SmootherConfig) -> Result<Self> {
        cfg.validate()?;
        let diag = a.diagonal();
        if let Some(row) = diag.iter().position(|&d| d == 0.0) {
            return Err(Error::ZeroDiagonal { row });
        }
        let relax = match cfg.kind {
            SmootherKind::GaussSeidel => 1.0,
            SmootherKind::Sor => cfg.omega,
            SmootherKind::DampedJacobi => cfg.jacobi_damping.unwrap_or_else(|| {
                let worst = (0..a.nrows())
                    .map(|i| a.row(i).1.iter().map(|v| v.abs()).sum::<f64>() / diag[i])
                    .fold(0.0, f64::max);
                1.0 / worst
            }),
        };
        Ok(Self { cfg, diag, relax })
    }

    pub fn config(&self) -> &SmootherConfig {
        &self.cfg
    }

    /// Relaxation factor actually used (the automatic Jacobi damping when
    /// none was given).
    pub fn relaxation(&self) -> f64 {
        self.relax
    }

    /// `ν` sweeps of `x ← x + R (b - A x)`, or of `Rᵀ` when `transposed`.
    pub fn smooth(&self, a: &CsrMatrix, b: &[f64], x: &mut [f64], transposed: bool) {
        for _ in 0..self.cfg.sweeps {
            self.sweep(a, b, x, transposed);
        }
    }

    /// One sweep.
    pub fn sweep(&self, a: &CsrMatrix, b: &[f64], x: &mut [f64], transposed: bool) {
        let n = a.nrows();
        match self.cfg.kind {
            SmootherKind::DampedJacobi => {
                let r = a.residual(b, x);
                for i in 0..n {
                    x[i] += self.relax * r[i] / self.diag[i];
                }
            }
            SmootherKind::GaussSeidel | SmootherKind::Sor => {
                let mut update = |i: usize| {
                    let (cols, vals) = a.row(i);
                    let mut r = b[i];
                    for (&j, &v) in cols.iter().zip(vals) {
                        r -= v * x[j];
                    }
                    x[i] += self.relax * r / self.diag[i];
                };
                if transposed {
                    (0..n).rev().for_each(&mut update);
                } else {
                    (0..n).for_each(&mut update);
                }
            }
        }
    }
}

/// Free-function form of [`Smoother::smooth`]; builds the smoother on the
/// fly.
pub fn smooth(a: &CsrMatrix, rhs: &[f64], x: &[f64], cfg: SmootherConfig, transposed: bool) -> Result<Vec<f64>> {
    let s = Smoother::new(a, cfg)?;
    let mut out = x.to_vec();
    s.smooth(a, rhs, &mut out, transposed);
    Ok(out)
}
