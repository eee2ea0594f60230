use super::{is_convex_ccw, Point2, PolygonalMesh, VertexKind};
use crate::error::{Error, Result};

/// Position of a fine edge relative to the coarse mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FineEdgeClass {
    /// Half of coarse edge `coarse_edge`; `half` is 0 for the half touching
    /// the coarse edge's first endpoint, 1 for the second.
    BoundaryHalf { coarse_edge: usize, half: u8 },
    /// Joins the center of `coarse_cell` to one of its edge midpoints.
    Interior { coarse_cell: usize },
}

/// A coarse mesh, its uniform refinement, and the maps between them.
#[derive(Debug, Clone)]
pub struct MeshHierarchy {
    pub coarse: PolygonalMesh,
    pub fine: PolygonalMesh,
    pub coarse_vertex_image: Vec<usize>,
    pub midpoint_of_coarse_edge: Vec<usize>,
    pub center_of_coarse_cell: Vec<usize>,
    pub fine_edge_class: Vec<FineEdgeClass>,
}

/// Source of a fine vertex in the coarse mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FineVertexOrigin {
    Vertex(usize),
    EdgeMidpoint(usize),
    CellCenter(usize),
}

impl MeshHierarchy {
    pub fn fine_vertex_origin(&self) -> Vec<FineVertexOrigin> {
        let mut origin = vec![FineVertexOrigin::Vertex(usize::MAX); self.fine.n_vertices()];
        for (v, &f) in self.coarse_vertex_image.iter().enumerate() {
            origin[f] = FineVertexOrigin::Vertex(v);
        }
        for (e, &f) in self.midpoint_of_coarse_edge.iter().enumerate() {
            origin[f] = FineVertexOrigin::EdgeMidpoint(e);
        }
        for (c, &f) in self.center_of_coarse_cell.iter().enumerate() {
            origin[f] = FineVertexOrigin::CellCenter(c);
        }
        origin
    }
}

/// Split every coarse cell with `n` vertices into `n` quadrilaterals by
/// joining its edge midpoints to its vertex average.
///
/// Fine vertices are numbered coarse vertices first, then one midpoint per
/// coarse edge, then one center per coarse cell.
pub fn refine(coarse: &PolygonalMesh) -> Result<MeshHierarchy> {
    for c in &coarse.cells {
        if !is_convex_ccw(&coarse.cell_points(c.id)) {
            return Err(Error::NonConvexCell { cell: c.id });
        }
    }

    let nv = coarse.n_vertices();
    let ne = coarse.n_edges();
    let nc = coarse.n_cells();

    let mut verts: Vec<(Point2, VertexKind)> = Vec::with_capacity(nv + ne + nc);
    verts.extend(coarse.vertices.iter().map(|v| (v.position, VertexKind::CoarseVertex)));
    for e in &coarse.edges {
        let (a, b) = e.endpoints;
        let p = coarse.vertices[a].position.midpoint(coarse.vertices[b].position);
        verts.push((p, VertexKind::EdgeMidpoint));
    }
    verts.extend(coarse.cells.iter().map(|c| (c.vertex_average, VertexKind::CellCenter)));

    let coarse_vertex_image: Vec<usize> = (0..nv).collect();
    let midpoint_of_coarse_edge: Vec<usize> = (nv..nv + ne).collect();
    let center_of_coarse_cell: Vec<usize> = (nv + ne..nv + ne + nc).collect();

    let mut loops = Vec::with_capacity(coarse.cells.iter().map(|c| c.n_vertices()).sum());
    for c in &coarse.cells {
        let n = c.n_vertices();
        let center = center_of_coarse_cell[c.id];
        for i in 0..n {
            let next_mid = midpoint_of_coarse_edge[c.edge_ids[i]];
            let prev_mid = midpoint_of_coarse_edge[c.edge_ids[(i + n - 1) % n]];
            loops.push(vec![c.vertex_loop[i], next_mid, center, prev_mid]);
        }
    }

    let fine = PolygonalMesh::new(verts, loops)?;

    let mut fine_edge_class = Vec::with_capacity(fine.n_edges());
    for e in &fine.edges {
        let (a, b) = e.endpoints;
        let class = classify(coarse, nv, ne, a, b).or_else(|| classify(coarse, nv, ne, b, a));
        match class {
            Some(c) => fine_edge_class.push(c),
            None => {
                return Err(Error::InvalidMesh(format!(
                    "fine edge {} ({a}, {b}) has no coarse origin",
                    e.id
                )))
            }
        }
    }

    Ok(MeshHierarchy {
        coarse: coarse.clone(),
        fine,
        coarse_vertex_image,
        midpoint_of_coarse_edge,
        center_of_coarse_cell,
        fine_edge_class,
    })
}

fn classify(coarse: &PolygonalMesh, nv: usize, ne: usize, a: usize, b: usize) -> Option<FineEdgeClass> {
    if a < nv && (nv..nv + ne).contains(&b) {
        let ce = b - nv;
        let (p, q) = coarse.edges[ce].endpoints;
        if a == p {
            return Some(FineEdgeClass::BoundaryHalf { coarse_edge: ce, half: 0 });
        }
        if a == q {
            return Some(FineEdgeClass::BoundaryHalf { coarse_edge: ce, half: 1 });
        }
        return None;
    }
    if a >= nv + ne && (nv..nv + ne).contains(&b) {
        return Some(FineEdgeClass::Interior { coarse_cell: a - nv - ne });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_initial, validate, MeshFamily};

    fn single(points: &[(f64, f64)]) -> PolygonalMesh {
        let v = points
            .iter()
            .map(|&(x, y)| (Point2::new(x, y), VertexKind::CoarseVertex))
            .collect();
        PolygonalMesh::new(v, vec![(0..points.len()).collect()]).unwrap()
    }

    #[test]
    fn unit_square_gives_four_quarters() {
        let h = refine(&single(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])).unwrap();
        assert_eq!(h.fine.n_cells(), 4);
        let c = h.center_of_coarse_cell[0];
        assert_eq!(h.fine.vertices[c].position, Point2::new(0.5, 0.5));
        assert!(!h.fine.vertices[c].on_boundary);
        for cell in &h.fine.cells {
            assert!((cell.area - 0.25).abs() < 1e-15);
            assert!((cell.diameter - 0.5f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn triangle_gives_three_quads() {
        let h = refine(&single(&[(0.0, 0.0), (1.0, 0.0), (0.5, 0.8)])).unwrap();
        assert_eq!(h.fine.n_cells(), 3);
        assert!(h.fine.cells.iter().all(|c| c.n_vertices() == 4));
        let total: f64 = h.fine.cells.iter().map(|c| c.area).sum();
        assert!((total - h.coarse.cells[0].area).abs() < 1e-15);
    }

    #[test]
    fn quad_level_one_refinement_counts() {
        let coarse = generate_initial(MeshFamily::Quad, 1).unwrap();
        let h = refine(&coarse).unwrap();
        assert_eq!(h.fine.n_cells(), 64);
        assert_eq!(h.fine.n_vertices(), 25 + 40 + 16);
        assert!(validate(&h.fine).conforming);
    }

    #[test]
    fn edge_classes_split_as_expected() {
        for family in MeshFamily::ALL {
            let coarse = generate_initial(family, 1).unwrap();
            let h = refine(&coarse).unwrap();
            let halves = h
                .fine_edge_class
                .iter()
                .filter(|c| matches!(c, FineEdgeClass::BoundaryHalf { .. }))
                .count();
            let interior = h.fine_edge_class.len() - halves;
            assert_eq!(halves, 2 * coarse.n_edges());
            let sum_n: usize = coarse.cells.iter().map(|c| c.n_vertices()).sum();
            assert_eq!(interior, sum_n);
        }
    }

    #[test]
    fn non_convex_cell_is_named() {
        let m = single(&[(0.0, 0.0), (1.0, 0.0), (0.3, 0.3), (0.0, 1.0)]);
        match refine(&m) {
            Err(Error::NonConvexCell { cell }) => assert_eq!(cell, 0),
            other => panic!("expected NonConvexCell, got {other:?}"),
        }
    }
}
