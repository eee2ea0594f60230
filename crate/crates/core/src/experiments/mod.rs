//! Experiment driver: builds the level problems, runs the solvers and writes
//! the result tables.

mod plot;
mod problem;
mod table;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mesh::MeshFamily;
use crate::twolevel::{CoarseOperatorKind, SmootherConfig};

pub use plot::emit_plot_script;
pub use problem::{LevelProblem, ManufacturedProblem};
pub use table::{run_row, run_table, write_csv, RowResult, CSV_COLUMNS, CSV_VERSION};

/// Fine operator that is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    /// The MFD stiffness `A_h`; the only choice whose solution approximates `u`.
    Mfd,
    /// The edge form `a(·,·)` the preconditioner is built on. Spectrally
    /// equivalent to `A_h` but a different discretization (twice `A_h` on
    /// squares), so nodal errors are not reported for it.
    EdgeForm,
}

impl SystemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SystemKind::Mfd => "mfd",
            SystemKind::EdgeForm => "edge",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mfd" => Ok(SystemKind::Mfd),
            "edge" => Ok(SystemKind::EdgeForm),
            other => Err(Error::InvalidArgument(format!("unknown system `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverMode {
    /// Stationary two-level iteration.
    TwoLevel,
    /// CG preconditioned by one two-level cycle.
    Pcg,
    /// Unpreconditioned CG.
    Cg,
    /// Cheeger constant and eigenvalue extremes of the graph Laplacian.
    Spectral,
}

impl SolverMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverMode::TwoLevel => "tg",
            SolverMode::Pcg => "pcg",
            SolverMode::Cg => "cg",
            SolverMode::Spectral => "spectral",
        }
    }

    /// Modes that need a coarse mesh.
    pub fn needs_hierarchy(self) -> bool {
        matches!(self, SolverMode::TwoLevel | SolverMode::Pcg)
    }
}

impl fmt::Display for SolverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tg" => Ok(SolverMode::TwoLevel),
            "pcg" => Ok(SolverMode::Pcg),
            "cg" => Ok(SolverMode::Cg),
            "spectral" => Ok(SolverMode::Spectral),
            other => Err(Error::InvalidArgument(format!("unknown mode `{other}`"))),
        }
    }
}

/// One table row: a mesh family refined `fine_level` times from initial
/// level `initial_level`, and how to solve it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub family: MeshFamily,
    pub initial_level: usize,
    /// Refinements of the initial mesh; `0` is the initial mesh itself and is
    /// only valid for `cg` and `spectral`.
    pub fine_level: usize,
    pub smoother: SmootherConfig,
    pub coarse: CoarseOperatorKind,
    pub system: SystemKind,
    pub mode: SolverMode,
    pub tol: f64,
    pub max_iterations: usize,
}

impl RunConfig {
    pub fn new(family: MeshFamily, initial_level: usize, fine_level: usize, mode: SolverMode) -> Self {
        Self {
            family,
            initial_level,
            fine_level,
            smoother: SmootherConfig::gauss_seidel(2),
            coarse: CoarseOperatorKind::SparsifiedEdge,
            system: SystemKind::EdgeForm,
            mode,
            tol: 1e-9,
            max_iterations: 10_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.initial_level < 1 {
            return Err(Error::InvalidLevel(self.initial_level));
        }
        if self.mode.needs_hierarchy() && self.fine_level < 1 {
            return Err(Error::InvalidArgument(format!(
                "mode {} needs fine level >= 1",
                self.mode
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", self.tol)));
        }
        self.smoother.validate()
    }
}
