use crate::discretization::DofMap;
use crate::mesh::{FineEdgeClass, MeshHierarchy};
use crate::sparse::CsrMatrix;

/// Coarse-to-fine extension on free dofs: identity at coarse vertices, the
/// mean of the two endpoints at edge midpoints and the mean of the `n_E`
/// vertices at cell centers. Boundary (zero) coarse values are dropped.
pub fn build_prolongation(hier: &MeshHierarchy, coarse_dofs: &DofMap, fine_dofs: &DofMap) -> CsrMatrix {
    use crate::mesh::FineVertexOrigin as O;

    let coarse = &hier.coarse;
    let origin = hier.fine_vertex_origin();
    let mut t = Vec::new();
    for (row, &fv) in fine_dofs.free_dofs.iter().enumerate() {
        let mut push = |cv: usize, w: f64| {
            if let Some(col) = coarse_dofs.dof(cv) {
                t.push((row, col, w));
            }
        };
        match origin[fv] {
            O::Vertex(v) => push(v, 1.0),
            O::EdgeMidpoint(e) => {
                let (a, b) = coarse.edges[e].endpoints;
                push(a, 0.5);
                push(b, 0.5);
            }
            O::CellCenter(c) => {
                let lp = &coarse.cells[c].vertex_loop;
                let w = 1.0 / lp.len() as f64;
                for &v in lp {
                    push(v, w);
                }
            }
        }
    }
    CsrMatrix::from_triplets(fine_dofs.n_free(), coarse_dofs.n_free(), &t)
}

/// `Π_H`: fine values at the images of the coarse vertices, on free dofs.
pub fn interpolate_to_coarse(v_fine: &[f64], hier: &MeshHierarchy, coarse_dofs: &DofMap, fine_dofs: &DofMap) -> Vec<f64> {
    coarse_dofs
        .free_dofs
        .iter()
        .map(|&cv| {
            let fv = hier.coarse_vertex_image[cv];
            fine_dofs.dof(fv).map_or(0.0, |k| v_fine[k])
        })
        .collect()
}

/// The two fine half edges of every coarse edge, as `[half 0, half 1]`.
pub fn coarse_edge_halves(hier: &MeshHierarchy) -> Vec<[usize; 2]> {
    let mut halves = vec![[usize::MAX; 2]; hier.coarse.n_edges()];
    for (fe, class) in hier.fine_edge_class.iter().enumerate() {
        if let FineEdgeClass::BoundaryHalf { coarse_edge, half } = *class {
            halves[coarse_edge][half as usize] = fe;
        }
    }
    halves
}
