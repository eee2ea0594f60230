//! Structured initial partitions of the unit square.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{refine, MeshHierarchy, Point2, PolygonalMesh, VertexKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeshFamily {
    /// Right triangles, two per square of an `m x m` grid.
    Tria,
    /// Uniform `m x m` squares.
    Quad,
    /// Honeycomb clipped to the square; boundary cells become quads and
    /// pentagons.
    Hex,
}

impl MeshFamily {
    pub const ALL: [MeshFamily; 3] = [MeshFamily::Tria, MeshFamily::Quad, MeshFamily::Hex];

    pub fn as_str(self) -> &'static str {
        match self {
            MeshFamily::Tria => "tria",
            MeshFamily::Quad => "quad",
            MeshFamily::Hex => "hex",
        }
    }
}

impl fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeshFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tria" => Ok(MeshFamily::Tria),
            "quad" => Ok(MeshFamily::Quad),
            "hex" => Ok(MeshFamily::Hex),
            other => Err(Error::InvalidArgument(format!("unknown mesh family `{other}`"))),
        }
    }
}

/// Subdivisions per side at initial level `level`: 4 at level 1, doubling.
fn grid_size(level: usize) -> usize {
    4 << (level - 1)
}

pub fn generate_initial(family: MeshFamily, level: usize) -> Result<PolygonalMesh> {
    if level < 1 {
        return Err(Error::InvalidLevel(level));
    }
    if level > 12 {
        return Err(Error::InvalidArgument(format!("initial level {level} is too large")));
    }
    let m = grid_size(level);
    match family {
        MeshFamily::Quad => structured(m, false),
        MeshFamily::Tria => structured(m, true),
        MeshFamily::Hex => honeycomb(m),
    }
}

/// Generate the initial mesh and refine it `fine_level` times. Returns the
/// hierarchy whose fine mesh is at `fine_level` (so `fine_level >= 1`).
pub fn generate_level(family: MeshFamily, initial_level: usize, fine_level: usize) -> Result<MeshHierarchy> {
    if fine_level < 1 {
        return Err(Error::InvalidArgument(
            "a two-level hierarchy needs fine level >= 1".into(),
        ));
    }
    let mut mesh = generate_initial(family, initial_level)?;
    for _ in 1..fine_level {
        mesh = refine(&mesh)?.fine;
    }
    refine(&mesh)
}

fn structured(m: usize, triangles: bool) -> Result<PolygonalMesh> {
    let idx = |i: usize, j: usize| j * (m + 1) + i;
    let h = 1.0 / m as f64;
    let mut verts = Vec::with_capacity((m + 1) * (m + 1));
    for j in 0..=m {
        for i in 0..=m {
            let p = Point2::new(i as f64 * h, j as f64 * h);
            verts.push((p, VertexKind::CoarseVertex));
        }
    }
    let mut cells = Vec::new();
    for j in 0..m {
        for i in 0..m {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            if triangles {
                cells.push(vec![a, b, c]);
                cells.push(vec![a, c, d]);
            } else {
                cells.push(vec![a, b, c, d]);
            }
        }
    }
    PolygonalMesh::new(verts, cells)
}

/// Honeycomb of pointy-top hexagons on the integer lattice `X = 2m x`,
/// `Y = 3m y`. Rows sit at `Y = 3j`; even rows have centers at `X = 2i`,
/// odd rows at `X = 2i + 1`. Every clip line then passes through hexagon
/// centers or along hexagon sides, so clipping creates no slivers and every
/// clipped cell stays convex.
fn honeycomb(m: usize) -> Result<PolygonalMesh> {
    let (xmax, ymax) = (2 * m as i64, 3 * m as i64);
    let mut index: HashMap<(i64, i64), usize> = HashMap::new();
    let mut verts = Vec::new();
    let mut cells = Vec::new();

    for j in 0..=m as i64 {
        let cy = 3 * j;
        let (start, count) = if j % 2 == 0 { (0, m as i64 + 1) } else { (1, m as i64) };
        for i in 0..count {
            let cx = start + 2 * i;
            let hex = [
                (cx + 1, cy - 1),
                (cx + 1, cy + 1),
                (cx, cy + 2),
                (cx - 1, cy + 1),
                (cx - 1, cy - 1),
                (cx, cy - 2),
            ];
            let mut poly = hex.to_vec();
            poly = clip(&poly, |p| p.0, 0, true);
            poly = clip(&poly, |p| p.0, xmax, false);
            poly = clip(&poly, |p| p.1, 0, true);
            poly = clip(&poly, |p| p.1, ymax, false);
            poly.dedup();
            while poly.len() > 1 && poly.first() == poly.last() {
                poly.pop();
            }
            if poly.len() < 3 || twice_area(&poly) == 0 {
                continue;
            }
            let ids = poly
                .iter()
                .map(|&p| {
                    *index.entry(p).or_insert_with(|| {
                        verts.push((
                            Point2::new(p.0 as f64 / xmax as f64, p.1 as f64 / ymax as f64),
                            VertexKind::CoarseVertex,
                        ));
                        verts.len() - 1
                    })
                })
                .collect();
            cells.push(ids);
        }
    }
    PolygonalMesh::new(verts, cells)
}

fn twice_area(poly: &[(i64, i64)]) -> i64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p.0 * q.1 - q.0 * p.1
        })
        .sum()
}

/// One Sutherland-Hodgman pass against the half-plane `coord(p) >= c`
/// (`keep_above`) or `coord(p) <= c`. Intersections are lattice points for
/// the honeycomb above.
fn clip(poly: &[(i64, i64)], coord: impl Fn(&(i64, i64)) -> i64, c: i64, keep_above: bool) -> Vec<(i64, i64)> {
    let inside = |p: &(i64, i64)| if keep_above { coord(p) >= c } else { coord(p) <= c };
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for k in 0..n {
        let cur = poly[k];
        let prev = poly[(k + n - 1) % n];
        let (ci, pi) = (inside(&cur), inside(&prev));
        if ci != pi {
            out.push(intersect(prev, cur, &coord, c));
        }
        if ci {
            out.push(cur);
        }
    }
    out
}

fn intersect(p: (i64, i64), q: (i64, i64), coord: &impl Fn(&(i64, i64)) -> i64, c: i64) -> (i64, i64) {
    let (a, b) = (coord(&p), coord(&q));
    let num = c - a;
    let den = b - a;
    let lerp = |u: i64, v: i64| {
        let t = (v - u) * num;
        debug_assert_eq!(t % den, 0, "clip intersection is off the lattice");
        u + t / den
    };
    (lerp(p.0, q.0), lerp(p.1, q.1))
}
