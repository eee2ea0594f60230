use crate::discretization::DofMap;
use crate::linalg::symmetric_extremes;
use crate::mesh::PolygonalMesh;
use crate::sparse::CsrMatrix;

/// Largest vertex count for which the Cheeger constant is computed by
/// enumerating all subsets.
pub const MAX_EXACT_CHEEGER: usize = 24;

/// Simple undirected graph with an explicit maximum degree `m_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub max_degree: usize,
}

impl Graph {
    /// `max_degree` is taken from the edge list.
    pub fn from_edges(n_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut deg = vec![0; n_vertices];
        for &(a, b) in &edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        let max_degree = deg.into_iter().max().unwrap_or(0);
        Self {
            n_vertices,
            edges,
            max_degree,
        }
    }

    /// Graph on the free dofs whose edges are the mesh edges between two free
    /// vertices. `m_d` is the largest mesh degree of a free vertex, counting
    /// edges to the boundary as well.
    pub fn free_dofs(mesh: &PolygonalMesh, dofs: &DofMap) -> Self {
        let edges = mesh
            .edges
            .iter()
            .filter_map(|e| Some((dofs.dof(e.endpoints.0)?, dofs.dof(e.endpoints.1)?)))
            .collect();
        let deg = mesh.vertex_degrees();
        let max_degree = dofs.free_dofs.iter().map(|&v| deg[v]).max().unwrap_or(0);
        Self {
            n_vertices: dofs.n_free(),
            edges,
            max_degree,
        }
    }
}

/// `C_c = (1 / (2 √m_d)) min_S |E(S, S̄)| / min(|S|, |S̄|)` over nonempty
/// proper subsets, by Gray-code enumeration. `None` above
/// [`MAX_EXACT_CHEEGER`] vertices or for fewer than two vertices.
pub fn cheeger_constant(g: &Graph) -> Option<f64> {
    let n = g.n_vertices;
    if !(2..=MAX_EXACT_CHEEGER).contains(&n) || g.max_degree == 0 {
        return None;
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &g.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    // S and its complement give the same ratio, so keep vertex n-1 outside S
    // and walk the 2^(n-1) subsets of the others, flipping one bit per step.
    let mut in_s = vec![false; n];
    let mut size = 0usize;
    let mut cut = 0i64;
    let mut best = f64::INFINITY;
    for k in 1u64..(1u64 << (n - 1)) {
        let v = k.trailing_zeros() as usize;
        let entering = !in_s[v];
        for &u in &adj[v] {
            // edge (u, v) is cut after the flip iff u ends on the other side
            if in_s[u] == entering {
                cut -= 1;
            } else {
                cut += 1;
            }
        }
        in_s[v] = entering;
        if entering {
            size += 1;
        } else {
            size -= 1;
        }
        let ratio = cut as f64 / size.min(n - size) as f64;
        best = best.min(ratio);
    }
    Some(best / (2.0 * (g.max_degree as f64).sqrt()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBounds {
    pub cheeger: Option<f64>,
    pub max_degree: usize,
    pub eig_min: f64,
    pub eig_max: f64,
    /// `C_c² <= λ_min`, when `C_c` is available.
    pub lower_holds: Option<bool>,
    /// `λ_max <= m_d`.
    pub upper_holds: bool,
}

/// Cheeger constant, maximum degree and eigenvalue extremes of a graph
/// Laplacian `a_l` on the vertices of `g`. Comparisons use an absolute slack
/// of `1e-10`.
pub fn spectral_bounds(a_l: &CsrMatrix, g: &Graph) -> SpectralBounds {
    let (eig_min, eig_max) = symmetric_extremes(&a_l.to_dense());
    let cheeger = cheeger_constant(g);
    SpectralBounds {
        cheeger,
        max_degree: g.max_degree,
        eig_min,
        eig_max,
        lower_holds: cheeger.map(|c| c * c <= eig_min + 1e-10),
        upper_holds: eig_max <= g.max_degree as f64 + 1e-10,
    }
}
