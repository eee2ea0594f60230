//! Conforming convex polygonal partitions of the unit square.
//!
//! A [`PolygonalMesh`] is built from vertex positions and counterclockwise
//! vertex loops; edges, areas, diameters and both cell centers are derived
//! on construction. Two cell centers are kept apart on purpose:
//! [`Cell::vertex_average`] drives refinement and prolongation, while
//! [`Cell::mass_center`] enters the MFD consistency matrix.

mod generate;
mod io;
mod quality;
mod refine;

use std::collections::HashMap;

use crate::error::{Error, Result};

pub use generate::{generate_initial, generate_level, MeshFamily};
pub use io::{read_mesh, write_mesh};
pub use quality::{validate, QualityReport};
pub use refine::{refine, FineEdgeClass, FineVertexOrigin, MeshHierarchy};

/// Absolute tolerance for point coincidence and boundary detection.
pub const GEOM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// On the boundary of the unit square, within [`GEOM_TOL`].
    pub fn on_unit_square_boundary(self) -> bool {
        self.x.abs() <= GEOM_TOL
            || (self.x - 1.0).abs() <= GEOM_TOL
            || self.y.abs() <= GEOM_TOL
            || (self.y - 1.0).abs() <= GEOM_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    CoarseVertex,
    EdgeMidpoint,
    CellCenter,
}

impl VertexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VertexKind::CoarseVertex => "coarse",
            VertexKind::EdgeMidpoint => "midpoint",
            VertexKind::CellCenter => "center",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "coarse" => Some(VertexKind::CoarseVertex),
            "midpoint" => Some(VertexKind::EdgeMidpoint),
            "center" => Some(VertexKind::CellCenter),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: usize,
    pub position: Point2,
    pub on_boundary: bool,
    pub kind: VertexKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: usize,
    pub endpoints: (usize, usize),
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub id: usize,
    /// Counterclockwise vertex indices.
    pub vertex_loop: Vec<usize>,
    pub area: f64,
    /// Largest pairwise vertex distance.
    pub diameter: f64,
    /// Arithmetic mean of the vertex positions.
    pub vertex_average: Point2,
    /// Area centroid.
    pub mass_center: Point2,
    /// `edge_ids[i]` joins `vertex_loop[i]` and `vertex_loop[i + 1]`.
    pub edge_ids: Vec<usize>,
}

impl Cell {
    pub fn n_vertices(&self) -> usize {
        self.vertex_loop.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalMesh {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub cells: Vec<Cell>,
    /// Cells containing each edge (one for boundary edges, two for interior).
    pub edge_cells: Vec<Vec<usize>>,
    /// Largest cell diameter.
    pub characteristic_size: f64,
}

/// Signed shoelace area of a closed polygon.
pub fn signed_area(points: &[Point2]) -> f64 {
    let n = points.len();
    let mut s = 0.0;
    for i in 0..n {
        let p = points[i];
        let q = points[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    0.5 * s
}

/// Area centroid of a simple polygon with nonzero area.
pub fn polygon_centroid(points: &[Point2]) -> Point2 {
    let n = points.len();
    let a = signed_area(points);
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..n {
        let p = points[i];
        let q = points[(i + 1) % n];
        let w = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    Point2::new(cx / (6.0 * a), cy / (6.0 * a))
}

pub fn vertex_average(points: &[Point2]) -> Point2 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(x, y), p| (x + p.x, y + p.y));
    Point2::new(sx / n, sy / n)
}

pub fn polygon_diameter(points: &[Point2]) -> f64 {
    let mut d = 0.0_f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max(p.dist(*q));
        }
    }
    d
}

/// Strict convexity test for a counterclockwise loop: every turn is a left
/// turn, up to a tolerance relative to the squared diameter.
pub fn is_convex_ccw(points: &[Point2]) -> bool {
    let n = points.len();
    if n < 3 {
        return false;
    }
    let tol = 1e-12 * polygon_diameter(points).powi(2);
    (0..n).all(|i| {
        let a = points[(i + n - 1) % n];
        let b = points[i];
        let c = points[(i + 1) % n];
        let cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        cross > tol
    })
}

impl PolygonalMesh {
    /// Build a mesh from vertex data and cell loops. Loops given clockwise are
    /// reversed; cells must have at least three distinct vertices and
    /// positive area. Conformity is not checked here (see [`validate`]).
    pub fn new(vertices: Vec<(Point2, VertexKind)>, cell_loops: Vec<Vec<usize>>) -> Result<Self> {
        let nv = vertices.len();
        let vertices: Vec<Vertex> = vertices
            .into_iter()
            .enumerate()
            .map(|(id, (position, kind))| {
                if !position.x.is_finite() || !position.y.is_finite() {
                    return Err(Error::InvalidMesh(format!("vertex {id} has non-finite coordinates")));
                }
                Ok(Vertex {
                    id,
                    position,
                    on_boundary: position.on_unit_square_boundary(),
                    kind,
                })
            })
            .collect::<Result<_>>()?;

        let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut edge_cells: Vec<Vec<usize>> = Vec::new();
        let mut cells = Vec::with_capacity(cell_loops.len());

        for (id, mut lp) in cell_loops.into_iter().enumerate() {
            if lp.len() < 3 {
                return Err(Error::InvalidMesh(format!("cell {id} has fewer than 3 vertices")));
            }
            if let Some(&v) = lp.iter().find(|&&v| v >= nv) {
                return Err(Error::InvalidMesh(format!("cell {id} references missing vertex {v}")));
            }
            let mut sorted = lp.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != lp.len() {
                return Err(Error::InvalidMesh(format!("cell {id} repeats a vertex")));
            }
            let mut pts: Vec<Point2> = lp.iter().map(|&v| vertices[v].position).collect();
            let mut area = signed_area(&pts);
            if area < 0.0 {
                lp.reverse();
                pts.reverse();
                area = -area;
            }
            if area <= GEOM_TOL * GEOM_TOL {
                return Err(Error::InvalidMesh(format!("cell {id} has zero area")));
            }

            let n = lp.len();
            let mut edge_ids = Vec::with_capacity(n);
            for i in 0..n {
                let (a, b) = (lp[i], lp[(i + 1) % n]);
                let key = (a.min(b), a.max(b));
                let e = *edge_index.entry(key).or_insert_with(|| {
                    let eid = edges.len();
                    edges.push(Edge {
                        id: eid,
                        endpoints: (a, b),
                        length: vertices[a].position.dist(vertices[b].position),
                    });
                    edge_cells.push(Vec::new());
                    eid
                });
                edge_cells[e].push(id);
                edge_ids.push(e);
            }

            cells.push(Cell {
                id,
                area,
                diameter: polygon_diameter(&pts),
                vertex_average: vertex_average(&pts),
                mass_center: polygon_centroid(&pts),
                vertex_loop: lp,
                edge_ids,
            });
        }

        let characteristic_size = cells.iter().map(|c| c.diameter).fold(0.0, f64::max);
        Ok(Self {
            vertices,
            edges,
            cells,
            edge_cells,
            characteristic_size,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_points(&self, cell: usize) -> Vec<Point2> {
        self.cells[cell]
            .vertex_loop
            .iter()
            .map(|&v| self.vertices[v].position)
            .collect()
    }

    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(|c| c.area).sum()
    }

    /// Number of edges incident to each vertex.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_vertices()];
        for e in &self.edges {
            deg[e.endpoints.0] += 1;
            deg[e.endpoints.1] += 1;
        }
        deg
    }
}
