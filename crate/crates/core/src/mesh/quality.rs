use super::{is_convex_ccw, PolygonalMesh, GEOM_TOL};

/// Shape-regularity and topology summary of a mesh. Report only; nothing
/// here is enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub max_vertices_per_cell: usize,
    /// Range of `H_E / |e|` over cells and their edges.
    pub diameter_over_edge: (f64, f64),
    /// Range of `H_E^2 / |E|` over cells.
    pub diameter_sq_over_area: (f64, f64),
    pub total_area: f64,
    pub conforming: bool,
    pub convex: bool,
    /// First conformity problem found, if any.
    pub conformity_issue: Option<String>,
}

pub fn validate(mesh: &PolygonalMesh) -> QualityReport {
    let mut max_nv = 0;
    let mut doe = (f64::INFINITY, 0.0_f64);
    let mut dsa = (f64::INFINITY, 0.0_f64);
    let mut convex = true;

    for c in &mesh.cells {
        max_nv = max_nv.max(c.n_vertices());
        for &e in &c.edge_ids {
            let r = c.diameter / mesh.edges[e].length;
            doe = (doe.0.min(r), doe.1.max(r));
        }
        let r = c.diameter * c.diameter / c.area;
        dsa = (dsa.0.min(r), dsa.1.max(r));
        convex &= is_convex_ccw(&mesh.cell_points(c.id));
    }

    let total_area = mesh.total_area();
    let conformity_issue = conformity_issue(mesh, total_area);

    QualityReport {
        max_vertices_per_cell: max_nv,
        diameter_over_edge: doe,
        diameter_sq_over_area: dsa,
        total_area,
        conforming: conformity_issue.is_none(),
        convex,
        conformity_issue,
    }
}

/// Combinatorial conformity check for a partition of the unit square: every
/// edge lies in one or two cells, edges in two cells are traversed in
/// opposite directions, single-cell edges lie on the boundary, and the cell
/// areas add up to one. A hanging vertex leaves an unmatched edge inside the
/// domain and is caught by the third rule.
fn conformity_issue(mesh: &PolygonalMesh, total_area: f64) -> Option<String> {
    for (e, cells) in mesh.edge_cells.iter().enumerate() {
        let (a, b) = mesh.edges[e].endpoints;
        match cells.len() {
            1 => {
                let (pa, pb) = (mesh.vertices[a].position, mesh.vertices[b].position);
                let mid = pa.midpoint(pb);
                let on_side = |f: fn(&super::Point2) -> f64, v: f64| {
                    (f(&pa) - v).abs() <= GEOM_TOL && (f(&pb) - v).abs() <= GEOM_TOL
                };
                let boundary = on_side(|p| p.x, 0.0)
                    || on_side(|p| p.x, 1.0)
                    || on_side(|p| p.y, 0.0)
                    || on_side(|p| p.y, 1.0);
                if !boundary || !mid.on_unit_square_boundary() {
                    return Some(format!("edge {e} ({a}, {b}) borders one cell but is interior"));
                }
            }
            2 => {
                let dir = |c: usize| {
                    let cell = &mesh.cells[c];
                    let k = cell.edge_ids.iter().position(|&x| x == e).unwrap();
                    cell.vertex_loop[k]
                };
                if dir(cells[0]) == dir(cells[1]) {
                    return Some(format!("edge {e} has inconsistent orientation"));
                }
            }
            n => return Some(format!("edge {e} borders {n} cells")),
        }
    }
    for v in &mesh.vertices {
        if v.on_boundary != v.position.on_unit_square_boundary() {
            return Some(format!("vertex {} has a wrong boundary flag", v.id));
        }
    }
    if (total_area - 1.0).abs() > 1e-12 {
        return Some(format!("cell areas sum to {total_area}, not 1"));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_initial, MeshFamily, Point2, VertexKind};

    #[test]
    fn uniform_quads_have_ratio_two() {
        let m = generate_initial(MeshFamily::Quad, 2).unwrap();
        let q = validate(&m);
        assert_eq!(q.max_vertices_per_cell, 4);
        assert!((q.diameter_sq_over_area.0 - 2.0).abs() < 1e-12);
        assert!((q.diameter_sq_over_area.1 - 2.0).abs() < 1e-12);
        assert!(q.conforming && q.convex);
    }

    #[test]
    fn hanging_vertex_fails_conformity() {
        // two unit-height rectangles; the left one has an extra vertex on the
        // shared side that the right one does not see
        let pts = [
            (0.0, 0.0),
            (0.5, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (0.5, 1.0),
            (0.0, 1.0),
            (0.5, 0.5),
        ];
        let v = pts
            .iter()
            .map(|&(x, y)| (Point2::new(x, y), VertexKind::CoarseVertex))
            .collect();
        let m = crate::mesh::PolygonalMesh::new(v, vec![vec![0, 1, 6, 4, 5], vec![1, 2, 3, 4]]).unwrap();
        let q = validate(&m);
        assert!(!q.conforming);
        assert!(q.conformity_issue.is_some());
    }
}
