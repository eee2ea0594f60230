use std::io::Write;

use rayon::prelude::*;

use super::{LevelProblem, RunConfig, SolverMode, SystemKind};
use crate::discretization::{assemble_graph_laplacian, spectral_bounds, Graph};
use crate::error::Result;
use crate::krylov::{cg, condition_number, condition_rate, pcg, stationary_two_level, StoppingRule};

pub const CSV_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 22] = [
    "version",
    "family",
    "L",
    "level",
    "dofs",
    "mode",
    "smoother",
    "nu",
    "coarse",
    "system",
    "iterations",
    "converged",
    "rho",
    "cond",
    "rate",
    "coarse_nnz",
    "cheeger",
    "max_degree",
    "eig_min",
    "eig_max",
    "max_error",
    "failure",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RowResult {
    pub config: RunConfig,
    pub dofs: usize,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
    pub rho: Option<f64>,
    /// `κ(A)` for `tg` and `cg`, the PCG estimate of `κ(B⁻¹A)` for `pcg`,
    /// `λ_max / λ_min` of the graph Laplacian for `spectral`.
    pub cond: Option<f64>,
    /// `log₂` of the ratio to the previous level of the same setup, filled
    /// in by [`run_table`].
    pub rate: Option<f64>,
    pub coarse_nnz: Option<usize>,
    pub cheeger: Option<f64>,
    pub max_degree: Option<usize>,
    pub eig_min: Option<f64>,
    pub eig_max: Option<f64>,
    pub max_error: Option<f64>,
    pub failure: Option<String>,
}

impl RowResult {
    fn empty(config: RunConfig) -> Self {
        Self {
            config,
            dofs: 0,
            iterations: None,
            converged: None,
            rho: None,
            cond: None,
            rate: None,
            coarse_nnz: None,
            cheeger: None,
            max_degree: None,
            eig_min: None,
            eig_max: None,
            max_error: None,
            failure: None,
        }
    }

    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Run one configuration. Errors and failed convergence are recorded in the
/// row rather than returned.
pub fn run_row(config: RunConfig) -> RowResult {
    let mut row = RowResult::empty(config);
    if let Err(e) = fill_row(&mut row) {
        row.failure = Some(e.to_string());
    }
    row
}

fn fill_row(row: &mut RowResult) -> Result<()> {
    let c = row.config;
    c.validate()?;
    let problem = LevelProblem::build(c.family, c.initial_level, c.fine_level, c.system)?;
    row.dofs = problem.n_dofs();
    let stop = StoppingRule::new(c.tol, c.max_iterations)?;
    let a = &problem.system;

    let report = match c.mode {
        SolverMode::TwoLevel => {
            let tl = problem.preconditioner(c.coarse, c.smoother)?;
            row.coarse_nnz = Some(tl.coarse_nnz());
            row.cond = Some(condition_number(a));
            let (x, r) = stationary_two_level(a, &tl, &problem.rhs, stop);
            row.max_error = nodal_error(&problem, &x);
            Some(r)
        }
        SolverMode::Pcg => {
            let tl = problem.preconditioner(c.coarse, c.smoother)?;
            row.coarse_nnz = Some(tl.coarse_nnz());
            let (x, r) = pcg(a, &tl, &problem.rhs, stop);
            row.cond = r.cond_estimate;
            row.max_error = nodal_error(&problem, &x);
            Some(r)
        }
        SolverMode::Cg => {
            row.cond = Some(condition_number(a));
            let (x, r) = cg(a, &problem.rhs, stop);
            row.max_error = nodal_error(&problem, &x);
            Some(r)
        }
        SolverMode::Spectral => {
            let mesh = problem.mesh();
            let al = assemble_graph_laplacian(mesh, &problem.fine_dofs);
            let g = Graph::free_dofs(mesh, &problem.fine_dofs);
            let sb = spectral_bounds(&al, &g);
            row.cheeger = sb.cheeger;
            row.max_degree = Some(sb.max_degree);
            row.eig_min = Some(sb.eig_min);
            row.eig_max = Some(sb.eig_max);
            row.cond = Some(sb.eig_max / sb.eig_min);
            None
        }
    };

    if let Some(r) = report {
        row.iterations = Some(r.iterations);
        row.converged = Some(r.converged);
        row.rho = Some(r.rho);
        if r.diverged {
            row.failure = Some(format!("diverged after {} iterations", r.iterations));
        } else if !r.converged {
            row.failure = Some(format!("no convergence in {} iterations", r.iterations));
        }
    }
    Ok(())
}

fn nodal_error(problem: &LevelProblem, x: &[f64]) -> Option<f64> {
    (problem.system_kind == SystemKind::Mfd).then(|| problem.max_nodal_error(x))
}

/// Same setup up to the fine level.
fn same_series(a: &RunConfig, b: &RunConfig) -> bool {
    RunConfig {
        fine_level: 0,
        ..*a
    } == RunConfig {
        fine_level: 0,
        ..*b
    }
}

/// Run all configurations concurrently; rows come back in input order, with
/// `rate` filled in wherever the previous level of the same setup is in the
/// table.
pub fn run_table(configs: &[RunConfig]) -> Vec<RowResult> {
    let mut rows: Vec<RowResult> = configs.par_iter().map(|&c| run_row(c)).collect();
    for i in 0..rows.len() {
        let cur = rows[i].config;
        let prev = rows.iter().find(|r| {
            same_series(&r.config, &cur) && r.config.fine_level + 1 == cur.fine_level
        });
        if let (Some(p), Some(k)) = (prev.and_then(|p| p.cond), rows[i].cond) {
            rows[i].rate = condition_rate(&[p, k]).ok().map(|r| r[0]);
        }
    }
    rows
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn sci(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.6e}"))
}

pub fn write_csv<W: Write>(out: &mut W, rows: &[RowResult]) -> std::io::Result<()> {
    writeln!(out, "{}", CSV_COLUMNS.join(","))?;
    for r in rows {
        let c = &r.config;
        let fields = [
            CSV_VERSION.to_string(),
            c.family.to_string(),
            c.initial_level.to_string(),
            c.fine_level.to_string(),
            r.dofs.to_string(),
            c.mode.to_string(),
            c.smoother.kind.to_string(),
            c.smoother.sweeps.to_string(),
            c.coarse.to_string(),
            c.system.to_string(),
            opt(r.iterations),
            opt(r.converged),
            sci(r.rho),
            sci(r.cond),
            r.rate.map_or_else(String::new, |x| format!("{x:.4}")),
            opt(r.coarse_nnz),
            sci(r.cheeger),
            opt(r.max_degree),
            sci(r.eig_min),
            sci(r.eig_max),
            sci(r.max_error),
            r.failure.as_deref().unwrap_or("").replace([',', '\n'], ";"),
        ];
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}
