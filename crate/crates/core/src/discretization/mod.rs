//! Discrete operators on a polygonal mesh.
//!
//! All global operators act on the free (interior) vertices only: homogeneous
//! Dirichlet conditions are imposed by dropping the boundary rows and columns.
//!
//! - [`assemble_mfd`]: the MFD stiffness `A_h`, assembled from
//!   [`LocalStiffness`] blocks.
//! - [`assemble_edge_form`]: the weighted edge Laplacian `A` with weights
//!   `a_e = Σ_{E ∋ e} κ_E |E| / h_e²`, spectrally equivalent to `A_h`.
//! - [`assemble_graph_laplacian`]: the same sum with unit weights per
//!   (edge, cell) pair.
//! - [`spectral_bounds`]: Cheeger constant and eigenvalue extremes of a small
//!   graph Laplacian.

mod assemble;
mod local;
mod spectral;

use crate::error::{Error, Result};
use crate::mesh::PolygonalMesh;

pub use assemble::{
    assemble_edge_form, assemble_graph_laplacian, assemble_mfd, assemble_rhs, d_norm, edge_operator,
    energy_norm,
};
pub use local::{build_n, build_r, LocalStiffness};
pub use spectral::{cheeger_constant, spectral_bounds, Graph, SpectralBounds, MAX_EXACT_CHEEGER};

/// Piecewise constant diffusion coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    values: Vec<f64>,
    kappa_star: f64,
    kappa_sup: f64,
}

impl Coefficient {
    pub fn constant(n_cells: usize, kappa: f64) -> Self {
        Self {
            values: vec![kappa; n_cells],
            kappa_star: kappa,
            kappa_sup: kappa,
        }
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if let Some(k) = values.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "coefficient values must be positive and finite, got {k}"
            )));
        }
        let kappa_star = values.iter().copied().fold(f64::INFINITY, f64::min);
        let kappa_sup = values.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            values,
            kappa_star,
            kappa_sup,
        })
    }

    pub fn value(&self, cell: usize) -> f64 {
        self.values[cell]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.kappa_star, self.kappa_sup)
    }
}

/// Numbering of the free vertices of a mesh.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofMap {
    /// Free dof `k` lives at vertex `free_dofs[k]`.
    pub free_dofs: Vec<usize>,
    pub constrained_dofs: Vec<usize>,
    vertex_to_dof: Vec<Option<usize>>,
}

impl DofMap {
    /// Interior vertices are free, in vertex order; boundary vertices are
    /// constrained.
    pub fn new(mesh: &PolygonalMesh) -> Self {
        let mut free_dofs = Vec::new();
        let mut constrained_dofs = Vec::new();
        let mut vertex_to_dof = vec![None; mesh.n_vertices()];
        for v in &mesh.vertices {
            if v.on_boundary {
                constrained_dofs.push(v.id);
            } else {
                vertex_to_dof[v.id] = Some(free_dofs.len());
                free_dofs.push(v.id);
            }
        }
        Self {
            free_dofs,
            constrained_dofs,
            vertex_to_dof,
        }
    }

    pub fn n_free(&self) -> usize {
        self.free_dofs.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_to_dof.len()
    }

    pub fn dof(&self, vertex: usize) -> Option<usize> {
        self.vertex_to_dof[vertex]
    }

    /// Free-dof vector to a vertex vector with zeros on the boundary.
    pub fn extend(&self, free: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.n_vertices()];
        for (k, &v) in self.free_dofs.iter().enumerate() {
            full[v] = free[k];
        }
        full
    }

    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.free_dofs.iter().map(|&v| full[v]).collect()
    }
}

/// Edge-form weights `a_e`, indexed by mesh edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeights {
    pub weights: Vec<f64>,
}

impl EdgeWeights {
    /// `a_e = Σ_{E ∋ e} κ_E |E| / h_e²`; interior edges collect one term from
    /// each neighboring cell.
    pub fn new(mesh: &PolygonalMesh, kappa: &Coefficient) -> Self {
        let weights = mesh
            .edges
            .iter()
            .map(|e| {
                let h2 = e.length * e.length;
                mesh.edge_cells[e.id]
                    .iter()
                    .map(|&c| kappa.value(c) * mesh.cells[c].area / h2)
                    .sum()
            })
            .collect();
        Self { weights }
    }

    pub fn get(&self, edge: usize) -> f64 {
        self.weights[edge]
    }
}
