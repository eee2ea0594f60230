//! Plain-text mesh format.
//!
//! ```text
//! vertices N edges M cells K
//! id x y boundary_flag kind        (N lines, kind = coarse | midpoint | center)
//! id v0 v1                         (M lines)
//! id n v0 ... v(n-1)               (K lines)
//! ```
//!
//! The reader rebuilds all derived geometry from the vertex positions and cell
//! loops and rejects files whose edge list or boundary flags disagree with it.

use std::io::{BufRead, Write};

use super::{Point2, PolygonalMesh, VertexKind};
use crate::error::{Error, Result};

pub fn write_mesh<W: Write>(out: &mut W, mesh: &PolygonalMesh) -> std::io::Result<()> {
    writeln!(
        out,
        "vertices {} edges {} cells {}",
        mesh.n_vertices(),
        mesh.n_edges(),
        mesh.n_cells()
    )?;
    for v in &mesh.vertices {
        writeln!(
            out,
            "{} {:e} {:e} {} {}",
            v.id,
            v.position.x,
            v.position.y,
            u8::from(v.on_boundary),
            v.kind.as_str()
        )?;
    }
    for e in &mesh.edges {
        writeln!(out, "{} {} {}", e.id, e.endpoints.0, e.endpoints.1)?;
    }
    for c in &mesh.cells {
        write!(out, "{} {}", c.id, c.n_vertices())?;
        for v in &c.vertex_loop {
            write!(out, " {v}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_fields(&mut self) -> Result<Vec<String>> {
        loop {
            let text = self.inner.next().ok_or_else(|| Error::Parse {
                line: self.line + 1,
                message: "unexpected end of file".into(),
            })??;
            self.line += 1;
            let t = text.trim();
            if !t.is_empty() {
                return Ok(t.split_whitespace().map(str::to_owned).collect());
            }
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            message: message.into(),
        }
    }

    fn num<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        s.parse().map_err(|_| self.err(format!("cannot parse `{s}`")))
    }
}

pub fn read_mesh<R: BufRead>(input: R) -> Result<PolygonalMesh> {
    let mut r = Lines {
        inner: input.lines(),
        line: 0,
    };
    let h = r.next_fields()?;
    if h.len() != 6 || h[0] != "vertices" || h[2] != "edges" || h[4] != "cells" {
        return Err(r.err("expected `vertices N edges M cells K`"));
    }
    let (nv, ne, nc): (usize, usize, usize) = (r.num(&h[1])?, r.num(&h[3])?, r.num(&h[5])?);

    let mut verts = Vec::with_capacity(nv);
    let mut flags = Vec::with_capacity(nv);
    for i in 0..nv {
        let f = r.next_fields()?;
        if f.len() != 5 {
            return Err(r.err("vertex line needs `id x y boundary_flag kind`"));
        }
        if r.num::<usize>(&f[0])? != i {
            return Err(r.err(format!("expected vertex id {i}")));
        }
        let p = Point2::new(r.num(&f[1])?, r.num(&f[2])?);
        let flag = match f[3].as_str() {
            "0" => false,
            "1" => true,
            _ => return Err(r.err("boundary flag must be 0 or 1")),
        };
        let kind = VertexKind::parse(&f[4]).ok_or_else(|| r.err(format!("unknown vertex kind `{}`", f[4])))?;
        verts.push((p, kind));
        flags.push(flag);
    }

    let mut edges = Vec::with_capacity(ne);
    for i in 0..ne {
        let f = r.next_fields()?;
        if f.len() != 3 || r.num::<usize>(&f[0])? != i {
            return Err(r.err(format!("expected edge line `{i} v0 v1`")));
        }
        let (a, b): (usize, usize) = (r.num(&f[1])?, r.num(&f[2])?);
        edges.push((a.min(b), a.max(b)));
    }

    let mut loops = Vec::with_capacity(nc);
    for i in 0..nc {
        let f = r.next_fields()?;
        if f.len() < 2 || r.num::<usize>(&f[0])? != i {
            return Err(r.err(format!("expected cell line `{i} n v0 ...`")));
        }
        let n: usize = r.num(&f[1])?;
        if f.len() != n + 2 {
            return Err(r.err(format!("cell {i} declares {n} vertices but lists {}", f.len() - 2)));
        }
        loops.push(f[2..].iter().map(|s| r.num(s)).collect::<Result<Vec<usize>>>()?);
    }

    let mesh = PolygonalMesh::new(verts, loops)?;
    for (v, &flag) in mesh.vertices.iter().zip(&flags) {
        if v.on_boundary != flag {
            return Err(Error::InvalidMesh(format!(
                "vertex {} boundary flag {} disagrees with its position",
                v.id,
                u8::from(flag)
            )));
        }
    }
    let mut listed = edges;
    let mut derived: Vec<(usize, usize)> = mesh
        .edges
        .iter()
        .map(|e| (e.endpoints.0.min(e.endpoints.1), e.endpoints.0.max(e.endpoints.1)))
        .collect();
    listed.sort_unstable();
    derived.sort_unstable();
    if listed != derived {
        return Err(Error::InvalidMesh("edge list does not match the cell loops".into()));
    }
    Ok(mesh)
}
