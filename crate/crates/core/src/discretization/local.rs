use nalgebra::{DMatrix, Matrix3};

use crate::error::{Error, Result};
use crate::mesh::{polygon_centroid, signed_area, Point2, PolygonalMesh};

/// Consistency matrix: row `i` is `(1, x_i - x̄, y_i - ȳ)` with `(x̄, ȳ)` the
/// mass center.
pub fn build_n(points: &[Point2], mass_center: Point2) -> DMatrix<f64> {
    DMatrix::from_fn(points.len(), 3, |i, j| match j {
        0 => 1.0,
        1 => points[i].x - mass_center.x,
        _ => points[i].y - mass_center.y,
    })
}

/// Row `i` is `(κ/2)(0, y_{i+1} - y_{i-1}, x_{i-1} - x_{i+1})`, cyclic.
pub fn build_r(points: &[Point2], kappa: f64) -> DMatrix<f64> {
    let n = points.len();
    DMatrix::from_fn(n, 3, |i, j| {
        let next = points[(i + 1) % n];
        let prev = points[(i + n - 1) % n];
        match j {
            0 => 0.0,
            1 => 0.5 * kappa * (next.y - prev.y),
            _ => 0.5 * kappa * (prev.x - next.x),
        }
    })
}

/// MFD stiffness block of one cell,
/// `A_E = (1/(κ|E|)) R Rᵀ + s (I - N (NᵀN)⁻¹ Nᵀ)` with
/// `s = trace((1/(κ|E|)) R Rᵀ)`.
#[derive(Debug, Clone)]
pub struct LocalStiffness {
    pub cell: usize,
    pub matrix: DMatrix<f64>,
    pub n_mat: DMatrix<f64>,
    pub r_mat: DMatrix<f64>,
    pub p_mat: DMatrix<f64>,
    pub s: f64,
}

impl LocalStiffness {
    pub fn for_cell(mesh: &PolygonalMesh, cell: usize, kappa: f64) -> Result<Self> {
        let c = &mesh.cells[cell];
        Self::from_polygon(cell, &mesh.cell_points(cell), c.mass_center, c.area, kappa)
    }

    /// Build from a counterclockwise vertex loop. `cell` is only used to
    /// label errors.
    pub fn from_polygon(cell: usize, points: &[Point2], mass_center: Point2, area: f64, kappa: f64) -> Result<Self> {
        let n_mat = build_n(points, mass_center);
        let r_mat = build_r(points, kappa);
        let n = points.len();

        let ntn = n_mat.transpose() * &n_mat;
        let ntn = Matrix3::from_fn(|i, j| ntn[(i, j)]);
        // (NᵀN)⁻¹ Nᵀ, one column of Nᵀ at a time
        let mut x = DMatrix::zeros(3, n);
        let scale = ntn.abs().max();
        for k in 0..n {
            let b = [n_mat[(k, 0)], n_mat[(k, 1)], n_mat[(k, 2)]];
            let col = solve3(&ntn, b, scale).ok_or(Error::DegenerateCell { cell })?;
            for i in 0..3 {
                x[(i, k)] = col[i];
            }
        }
        let p_mat = DMatrix::identity(n, n) - &n_mat * x;

        let consistency = (&r_mat * r_mat.transpose()) / (kappa * area);
        let s = consistency.trace();
        let matrix = consistency + &p_mat * s;
        Ok(Self {
            cell,
            matrix,
            n_mat,
            r_mat,
            p_mat,
            s,
        })
    }

    /// Convenience constructor computing area and mass center from the loop.
    pub fn from_points(points: &[Point2], kappa: f64) -> Result<Self> {
        let area = signed_area(points);
        if area <= 0.0 {
            return Err(Error::DegenerateCell { cell: 0 });
        }
        Self::from_polygon(0, points, polygon_centroid(points), area, kappa)
    }
}

/// Gaussian elimination with partial pivoting on a 3 x 3 system. `None` when
/// a pivot falls below `1e-13 * scale`.
fn solve3(m: &Matrix3<f64>, b: [f64; 3], scale: f64) -> Option<[f64; 3]> {
    let mut a = [[0.0; 4]; 3];
    for i in 0..3 {
        for j in 0..3 {
            a[i][j] = m[(i, j)];
        }
        a[i][3] = b[i];
    }
    for k in 0..3 {
        let p = (k..3).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        if a[p][k].abs() <= 1e-13 * scale {
            return None;
        }
        a.swap(k, p);
        for i in k + 1..3 {
            let f = a[i][k] / a[k][k];
            for j in k..4 {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let mut s = a[i][3];
        for j in i + 1..3 {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::symmetric_eigenvalues;

    fn unit_square() -> Vec<Point2> {
        vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ]
    }

    #[test]
    fn n_and_r_on_unit_square() {
        let pts = unit_square();
        let n = build_n(&pts, Point2::new(0.5, 0.5));
        let expect_n = [[1.0, -0.5, -0.5], [1.0, 0.5, -0.5], [1.0, 0.5, 0.5], [1.0, -0.5, 0.5]];
        let r = build_r(&pts, 1.0);
        // outward normals of the two edges at each corner, halved
        let expect_r = [[0.0, -0.5, -0.5], [0.0, 0.5, -0.5], [0.0, 0.5, 0.5], [0.0, -0.5, 0.5]];
        for i in 0..4 {
            for j in 0..3 {
                assert_eq!(n[(i, j)], expect_n[i][j]);
                assert_eq!(r[(i, j)], expect_r[i][j]);
            }
        }
        assert_eq!(build_r(&pts, 2.0), build_r(&pts, 1.0) * 2.0);
    }

    #[test]
    fn unit_square_has_one_zero_eigenvalue() {
        let k = LocalStiffness::from_points(&unit_square(), 1.0).unwrap();
        let eig = symmetric_eigenvalues(&k.matrix);
        assert!(eig[0].abs() < 1e-13);
        assert!(eig[1] > 0.1);
        // consistency part: R Rᵀ has trace 2 for the unit square
        assert!((k.s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn centered_columns_sum_to_center_offset() {
        let pts = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.3, 0.8),
            Point2::new(0.4, 1.1),
            Point2::new(-0.2, 0.6),
        ];
        let mc = polygon_centroid(&pts);
        let n = build_n(&pts, mc);
        let avg = crate::mesh::vertex_average(&pts);
        let sx: f64 = n.column(1).sum();
        let sy: f64 = n.column(2).sum();
        assert!((sx - 5.0 * (avg.x - mc.x)).abs() < 1e-14);
        assert!((sy - 5.0 * (avg.y - mc.y)).abs() < 1e-14);
        assert!(sx.abs() > 1e-3);
    }

    #[test]
    fn collinear_points_are_degenerate() {
        let pts = [Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), Point2::new(2.0, 2.0)];
        let r = LocalStiffness::from_polygon(7, &pts, Point2::new(1.0, 1.0), 1.0, 1.0);
        assert!(matches!(r, Err(Error::DegenerateCell { cell: 7 })));
    }
}
