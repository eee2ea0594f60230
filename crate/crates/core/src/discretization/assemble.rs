use rayon::prelude::*;

use super::{Coefficient, DofMap, EdgeWeights, LocalStiffness};
use crate::error::Result;
use crate::linalg::dot;
use crate::mesh::{Point2, PolygonalMesh};
use crate::sparse::CsrMatrix;

/// Global MFD stiffness on the free dofs. Local blocks are built in
/// parallel; the scatter runs in cell order so the result does not depend on
/// the number of threads.
pub fn assemble_mfd(mesh: &PolygonalMesh, kappa: &Coefficient, dofs: &DofMap) -> Result<CsrMatrix> {
    let locals: Vec<LocalStiffness> = (0..mesh.n_cells())
        .into_par_iter()
        .map(|c| LocalStiffness::for_cell(mesh, c, kappa.value(c)))
        .collect::<Result<_>>()?;

    let mut t = Vec::with_capacity(locals.iter().map(|l| l.matrix.len()).sum());
    for l in &locals {
        let lp = &mesh.cells[l.cell].vertex_loop;
        for (a, &va) in lp.iter().enumerate() {
            let Some(i) = dofs.dof(va) else { continue };
            for (b, &vb) in lp.iter().enumerate() {
                if let Some(j) = dofs.dof(vb) {
                    t.push((i, j, l.matrix[(a, b)]));
                }
            }
        }
    }
    let n = dofs.n_free();
    Ok(CsrMatrix::from_triplets(n, n, &t))
}

/// `Σ_e w_e δ_e(u) δ_e(v)` over mesh edges, restricted to the free dofs.
pub fn edge_operator(mesh: &PolygonalMesh, dofs: &DofMap, weights: &[f64]) -> CsrMatrix {
    let mut t = Vec::with_capacity(4 * mesh.n_edges());
    for e in &mesh.edges {
        let w = weights[e.id];
        let (a, b) = e.endpoints;
        let (da, db) = (dofs.dof(a), dofs.dof(b));
        if let Some(i) = da {
            t.push((i, i, w));
        }
        if let Some(j) = db {
            t.push((j, j, w));
        }
        if let (Some(i), Some(j)) = (da, db) {
            t.push((i, j, -w));
            t.push((j, i, -w));
        }
    }
    let n = dofs.n_free();
    CsrMatrix::from_triplets(n, n, &t)
}

pub fn assemble_edge_form(mesh: &PolygonalMesh, kappa: &Coefficient, dofs: &DofMap) -> (CsrMatrix, EdgeWeights) {
    let w = EdgeWeights::new(mesh, kappa);
    (edge_operator(mesh, dofs, &w.weights), w)
}

/// Unit weight per (edge, cell) pair, so an interior edge enters twice.
pub fn assemble_graph_laplacian(mesh: &PolygonalMesh, dofs: &DofMap) -> CsrMatrix {
    let w: Vec<f64> = mesh.edge_cells.iter().map(|c| c.len() as f64).collect();
    edge_operator(mesh, dofs, &w)
}

/// Load vector on the free dofs: vertex `i` of cell `E` receives
/// `f̄_E |E| / n_E`, where `f̄_E` is the cell average of `f` approximated by
/// the centroid rule on the fan of triangles around the mass center.
pub fn assemble_rhs(mesh: &PolygonalMesh, f: impl Fn(Point2) -> f64, dofs: &DofMap) -> Vec<f64> {
    let mut b = vec![0.0; dofs.n_free()];
    for c in &mesh.cells {
        let pts = mesh.cell_points(c.id);
        let n = pts.len();
        let m = c.mass_center;
        let mut integral = 0.0;
        for i in 0..n {
            let (p, q) = (pts[i], pts[(i + 1) % n]);
            let area = 0.5 * ((p.x - m.x) * (q.y - m.y) - (q.x - m.x) * (p.y - m.y));
            let g = Point2::new((m.x + p.x + q.x) / 3.0, (m.y + p.y + q.y) / 3.0);
            integral += area * f(g);
        }
        // f̄_E |E| / n_E
        let load = integral / n as f64;
        for &v in &c.vertex_loop {
            if let Some(i) = dofs.dof(v) {
                b[i] += load;
            }
        }
    }
    b
}

/// `‖v‖_a = (A v, v)^{1/2}`.
pub fn energy_norm(a: &CsrMatrix, v: &[f64]) -> f64 {
    dot(&a.mul_vec(v), v).max(0.0).sqrt()
}

/// `‖v‖_D = (D v, v)^{1/2}` with `D` the diagonal of `a`.
pub fn d_norm(a: &CsrMatrix, v: &[f64]) -> f64 {
    a.diagonal().iter().zip(v).map(|(d, x)| d * x * x).sum::<f64>().sqrt()
}
