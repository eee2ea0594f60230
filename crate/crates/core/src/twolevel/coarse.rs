use std::fmt;
use std::str::FromStr;

use super::prolongation::coarse_edge_halves;
use crate::discretization::{edge_operator, DofMap, EdgeWeights};
use crate::error::{Error, Result};
use crate::mesh::MeshHierarchy;
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoarseOperatorKind {
    /// `Pᵀ A P` with `A` the fine operator being solved.
    Galerkin,
    /// Coarse-edge form with weights averaged from the two fine half edges.
    SparsifiedEdge,
    /// Coarse-edge form with all weights equal to one.
    UnitEdge,
}

impl CoarseOperatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CoarseOperatorKind::Galerkin => "ah",
            CoarseOperatorKind::SparsifiedEdge => "bh",
            CoarseOperatorKind::UnitEdge => "unit",
        }
    }
}

impl fmt::Display for CoarseOperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CoarseOperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ah" | "galerkin" => Ok(CoarseOperatorKind::Galerkin),
            "bh" | "sparsified" => Ok(CoarseOperatorKind::SparsifiedEdge),
            "unit" => Ok(CoarseOperatorKind::UnitEdge),
            other => Err(Error::InvalidArgument(format!("unknown coarse operator `{other}`"))),
        }
    }
}

/// `a_{e,H} = (a_{e_{H,1}} + a_{e_{H,2}}) / 2` for every coarse edge.
pub fn averaged_coarse_weights(hier: &MeshHierarchy, fine_weights: &EdgeWeights) -> Vec<f64> {
    coarse_edge_halves(hier)
        .iter()
        .map(|&[h0, h1]| 0.5 * (fine_weights.get(h0) + fine_weights.get(h1)))
        .collect()
}

/// Coarse operator on the free coarse dofs.
///
/// `fine_operator` is only read for [`CoarseOperatorKind::Galerkin`].
pub fn build_coarse(
    kind: CoarseOperatorKind,
    hier: &MeshHierarchy,
    coarse_dofs: &DofMap,
    fine_weights: &EdgeWeights,
    prolongation: &CsrMatrix,
    fine_operator: &CsrMatrix,
) -> CsrMatrix {
    match kind {
        CoarseOperatorKind::Galerkin => fine_operator.galerkin(prolongation).pruned(0.0),
        CoarseOperatorKind::SparsifiedEdge => {
            edge_operator(&hier.coarse, coarse_dofs, &averaged_coarse_weights(hier, fine_weights))
        }
        CoarseOperatorKind::UnitEdge => edge_operator(&hier.coarse, coarse_dofs, &vec![1.0; hier.coarse.n_edges()]),
    }
}
