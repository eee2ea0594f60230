use std::f64::consts::{FRAC_PI_2, PI};

use super::SystemKind;
use crate::discretization::{assemble_edge_form, assemble_mfd, assemble_rhs, Coefficient, DofMap, EdgeWeights};
use crate::error::{Error, Result};
use crate::mesh::{generate_initial, generate_level, MeshFamily, MeshHierarchy, Point2, PolygonalMesh};
use crate::sparse::CsrMatrix;
use crate::twolevel::{build_coarse, build_prolongation, CoarseOperatorKind, SmootherConfig, TwoLevelPreconditioner};

/// `u(x, y) = x (y - y²) eʸ cos(πx/2)` with `κ = 1`, so `f = -Δu`.
///
/// Writing `u = h(x) g(y)` with `h = x cos(πx/2)` and `g = (y - y²) eʸ`:
/// `h'' = -π sin(πx/2) - (π²/4) x cos(πx/2)`, `g'' = -y (3 + y) eʸ`, and
/// `f = -(h'' g + h g'')`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ManufacturedProblem;

impl ManufacturedProblem {
    pub fn exact(&self, p: Point2) -> f64 {
        p.x * (p.y - p.y * p.y) * p.y.exp() * (FRAC_PI_2 * p.x).cos()
    }

    pub fn source(&self, p: Point2) -> f64 {
        let (x, y) = (p.x, p.y);
        let (s, c) = (FRAC_PI_2 * x).sin_cos();
        let h = x * c;
        let hxx = -PI * s - PI * PI / 4.0 * x * c;
        let g = (y - y * y) * y.exp();
        let gyy = -y * (3.0 + y) * y.exp();
        -(hxx * g + h * gyy)
    }

    pub fn rhs(&self, mesh: &PolygonalMesh, dofs: &DofMap) -> Vec<f64> {
        assemble_rhs(mesh, |p| self.source(p), dofs)
    }
}

/// Everything needed to solve on one fine level: the mesh (and its parent
/// when it was obtained by refinement), dof maps, the MFD and edge-form
/// operators and the manufactured right-hand side.
#[derive(Debug, Clone)]
pub struct LevelProblem {
    pub family: MeshFamily,
    pub initial_level: usize,
    pub fine_level: usize,
    pub system_kind: SystemKind,
    /// `None` when `fine_level == 0`.
    pub hierarchy: Option<MeshHierarchy>,
    initial: Option<PolygonalMesh>,
    pub fine_dofs: DofMap,
    pub coarse_dofs: Option<DofMap>,
    pub kappa: Coefficient,
    /// The operator that is solved (MFD or edge form).
    pub system: CsrMatrix,
    pub edge_form: CsrMatrix,
    pub weights: EdgeWeights,
    pub rhs: Vec<f64>,
}

impl LevelProblem {
    pub fn build(family: MeshFamily, initial_level: usize, fine_level: usize, system_kind: SystemKind) -> Result<Self> {
        let (hierarchy, initial) = if fine_level == 0 {
            (None, Some(generate_initial(family, initial_level)?))
        } else {
            (Some(generate_level(family, initial_level, fine_level)?), None)
        };
        let mesh = hierarchy.as_ref().map_or_else(|| initial.as_ref().unwrap(), |h| &h.fine);
        let fine_dofs = DofMap::new(mesh);
        let coarse_dofs = hierarchy.as_ref().map(|h| DofMap::new(&h.coarse));
        let kappa = Coefficient::constant(mesh.n_cells(), 1.0);
        let (edge_form, weights) = assemble_edge_form(mesh, &kappa, &fine_dofs);
        let system = match system_kind {
            SystemKind::Mfd => assemble_mfd(mesh, &kappa, &fine_dofs)?,
            SystemKind::EdgeForm => edge_form.clone(),
        };
        let rhs = ManufacturedProblem.rhs(mesh, &fine_dofs);
        Ok(Self {
            family,
            initial_level,
            fine_level,
            system_kind,
            hierarchy,
            initial,
            fine_dofs,
            coarse_dofs,
            kappa,
            system,
            edge_form,
            weights,
            rhs,
        })
    }

    pub fn mesh(&self) -> &PolygonalMesh {
        match &self.hierarchy {
            Some(h) => &h.fine,
            None => self.initial.as_ref().unwrap(),
        }
    }

    pub fn n_dofs(&self) -> usize {
        self.fine_dofs.n_free()
    }

    fn require_hierarchy(&self) -> Result<(&MeshHierarchy, &DofMap)> {
        match (&self.hierarchy, &self.coarse_dofs) {
            (Some(h), Some(d)) => Ok((h, d)),
            _ => Err(Error::InvalidArgument(
                "a two-level method needs fine level >= 1".into(),
            )),
        }
    }

    pub fn prolongation(&self) -> Result<CsrMatrix> {
        let (h, cd) = self.require_hierarchy()?;
        Ok(build_prolongation(h, cd, &self.fine_dofs))
    }

    /// Coarse operator for this problem. Galerkin uses the operator being
    /// solved, the edge forms always take their weights from `a(·,·)`.
    pub fn coarse_operator(&self, kind: CoarseOperatorKind, p: &CsrMatrix) -> Result<CsrMatrix> {
        let (h, cd) = self.require_hierarchy()?;
        Ok(build_coarse(
            kind,
            h,
            cd,
            &self.weights,
            p,
            &self.system,
        ))
    }

    pub fn preconditioner(&self, kind: CoarseOperatorKind, smoother: SmootherConfig) -> Result<TwoLevelPreconditioner> {
        let p = self.prolongation()?;
        let c = self.coarse_operator(kind, &p)?;
        TwoLevelPreconditioner::new(self.system.clone(), p, c, smoother)
    }

    /// Exact solution at the free vertices.
    pub fn exact_nodal(&self) -> Vec<f64> {
        let mesh = self.mesh();
        self.fine_dofs
            .free_dofs
            .iter()
            .map(|&v| ManufacturedProblem.exact(mesh.vertices[v].position))
            .collect()
    }

    pub fn max_nodal_error(&self, x: &[f64]) -> f64 {
        self.exact_nodal()
            .iter()
            .zip(x)
            .fold(0.0_f64, |m, (u, v)| m.max((u - v).abs()))
    }
}
