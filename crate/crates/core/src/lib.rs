//! Mimetic finite difference (MFD) discretizations of `-div(k grad u) = f` on
//! convex polygonal partitions of the unit square, together with a two-level
//! preconditioner whose coarse operator is a sparsified edge form.
//!
//! The crate is organised bottom-up:
//!
//! - [`mesh`]: polygonal meshes, structured generators and the
//!   midpoint/vertex-average refinement that produces a [`mesh::MeshHierarchy`].
//! - [`discretization`]: local MFD stiffness matrices, global assembly, the
//!   edge form, the graph Laplacian and graph-spectral bounds.
//! - [`twolevel`]: prolongation, smoothers, coarse operators and the
//!   symmetrized two-level cycle.
//! - [`krylov`]: CG, PCG, the stationary two-level loop and condition
//!   number estimation.
//! - [`experiments`]: the table driver used by the command-line tool.

pub mod discretization;
pub mod error;
pub mod experiments;
pub mod factor;
pub mod krylov;
pub mod linalg;
pub mod mesh;
pub mod sparse;
pub mod twolevel;

pub use error::{Error, Result};
pub use factor::SkylineCholesky;
pub use sparse::CsrMatrix;

pub use discretization::{Coefficient, DofMap, EdgeWeights};
pub use krylov::{SolveReport, StoppingRule};
pub use mesh::{MeshFamily, MeshHierarchy, Point2, PolygonalMesh};
pub use twolevel::{CoarseOperatorKind, SmootherConfig, SmootherKind, TwoLevelPreconditioner};
