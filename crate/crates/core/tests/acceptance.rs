//! Acceptance checks. Each test prints one `PASS`/`FAIL` line with the
//! measured values before asserting.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mfd_twolevel::discretization::{
    assemble_graph_laplacian, assemble_mfd, cheeger_constant, DofMap, Graph, LocalStiffness,
};
use mfd_twolevel::experiments::{LevelProblem, RunConfig, SolverMode, SystemKind};
use mfd_twolevel::krylov::{cg, lanczos_extremes, pcg, stationary_two_level, SolveReport};
use mfd_twolevel::linalg::{generalized_extremes, symmetric_eigenvalues};
use mfd_twolevel::mesh::{generate_initial, generate_level, signed_area, polygon_centroid};
use mfd_twolevel::twolevel::{a_norm_power, build_coarse, dense_smoother};
use mfd_twolevel::{CoarseOperatorKind, Coefficient, MeshFamily, Point2, SmootherConfig, StoppingRule};

fn verdict(id: u32, name: &str, pass: bool, detail: &str) {
    println!("criterion {id} [{name}]: {} -- {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} [{name}] failed: {detail}");
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn stop() -> StoppingRule {
    StoppingRule::new(1e-9, 10_000).unwrap()
}

fn two_level(family: MeshFamily, level: usize, smoother: SmootherConfig) -> SolveReport {
    let cfg = RunConfig {
        smoother,
        ..RunConfig::new(family, 1, level, SolverMode::TwoLevel)
    };
    let lp = LevelProblem::build(family, 1, level, cfg.system).unwrap();
    let tl = lp.preconditioner(cfg.coarse, cfg.smoother).unwrap();
    stationary_two_level(&lp.system, &tl, &lp.rhs, stop()).1
}

/// Convex polygon with `n` vertices on a random ellipse, counterclockwise.
fn random_convex_polygon(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point2> {
    let (cx, cy) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
    let (ax, ay) = (rng.gen_range(0.05..3.0), rng.gen_range(0.05..3.0));
    let tilt: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    loop {
        let mut t: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        t.sort_by(f64::total_cmp);
        // keep consecutive angles apart so no vertex is nearly collinear
        let gaps_ok = (0..n).all(|i| {
            let next = if i + 1 < n { t[i + 1] } else { t[0] + std::f64::consts::TAU };
            next - t[i] > 0.05
        });
        if !gaps_ok {
            continue;
        }
        let (s, c) = tilt.sin_cos();
        return t
            .iter()
            .map(|&a| {
                let (x, y) = (ax * a.cos(), ay * a.sin());
                Point2::new(cx + c * x - s * y, cy + s * x + c * y)
            })
            .collect();
    }
}

#[test]
fn c01_local_operator_exactness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = [0.0_f64; 4];
    let mut failures = Vec::new();
    for k in 0..200 {
        let n = rng.gen_range(3..=8);
        let pts = random_convex_polygon(&mut rng, n);
        let kappa = rng.gen_range(0.1..10.0);
        assert!(signed_area(&pts) > 0.0);
        let loc = LocalStiffness::from_polygon(k, &pts, polygon_centroid(&pts), signed_area(&pts), kappa).unwrap();
        let a = &loc.matrix;
        let norm = a.abs().max();
        let sym = (a - a.transpose()).abs().max() / norm;
        let eig = symmetric_eigenvalues(a);
        let lam_max = eig[n - 1];
        let min_eig = eig[0] / lam_max;
        let second = eig[1] / lam_max;
        let ones = a * DVector::from_element(n, 1.0);
        let kernel = ones.abs().max() / norm;
        let an = a * &loc.n_mat;
        let consistency = (&an - &loc.r_mat).abs().max() / loc.r_mat.abs().max();
        worst[0] = worst[0].max(sym);
        worst[1] = worst[1].min(min_eig);
        worst[2] = worst[2].max(kernel.max(consistency));
        worst[3] = if k == 0 { second } else { worst[3].min(second) };
        if sym > 1e-13 || min_eig < -1e-12 || second <= 0.0 || kernel > 1e-12 || consistency > 1e-12 {
            failures.push(k);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        1,
        "local operator exactness",
        failures.is_empty() && elapsed < Duration::from_secs(5),
        &format!(
            "max asym {:.1e}, min eig/|A| {:.1e}, 2nd eig/|A| >= {:.1e}, max |A1|,|AN-R| {:.1e}, {} bad polygons, {:.2?}",
            worst[0],
            worst[1],
            worst[3],
            worst[2],
            failures.len(),
            elapsed
        ),
    );
}

#[test]
fn c02_two_level_uniformity() {
    let start = Instant::now();
    let gs2 = SmootherConfig::gauss_seidel(2);
    let counts = |f: MeshFamily| -> Vec<usize> {
        (1..=5)
            .map(|l| {
                let r = two_level(f, l, gs2);
                if r.converged { r.iterations } else { usize::MAX }
            })
            .collect()
    };
    let (quad, (tria, hex)) = rayon::join(
        || counts(MeshFamily::Quad),
        || rayon::join(|| counts(MeshFamily::Tria), || counts(MeshFamily::Hex)),
    );
    let elapsed = start.elapsed();
    let quad_ok = quad.iter().all(|&k| (5..=13).contains(&k)) && quad[4] <= quad[1] + 3;
    let others_ok = tria.iter().chain(&hex).all(|&k| k <= 30);
    verdict(
        2,
        "two-level uniformity",
        quad_ok && others_ok && elapsed < Duration::from_secs(120),
        &format!("quad {quad:?}, tria {tria:?}, hex {hex:?}, {elapsed:.1?}"),
    );
}

#[test]
fn c03_condition_growth() {
    let kappas: Vec<f64> = (2..=5)
        .map(|l| {
            let lp = LevelProblem::build(MeshFamily::Quad, 1, l, SystemKind::Mfd).unwrap();
            let a = &lp.system;
            let (lo, hi) = lanczos_extremes(|v| a.mul_vec(v), a.nrows(), 2000, 1e-9, 7);
            hi / lo
        })
        .collect();
    let rates: Vec<f64> = kappas.windows(2).map(|w| (w[1] / w[0]).log2()).collect();
    verdict(
        3,
        "condition growth",
        rates.iter().all(|r| (r - 2.0).abs() <= 0.4),
        &format!("kappa(l=2..5) {}, rates(l=3..5) {rates:.3?}", sci(&kappas)),
    );
}

#[test]
fn c04_preconditioner_uniformity() {
    let start = Instant::now();
    let rows: Vec<(usize, usize)> = (1..=5)
        .map(|l| {
            let cfg = RunConfig::new(MeshFamily::Hex, 1, l, SolverMode::Pcg);
            let lp = LevelProblem::build(MeshFamily::Hex, 1, l, cfg.system).unwrap();
            let tl = lp.preconditioner(cfg.coarse, cfg.smoother).unwrap();
            let (_, p) = pcg(&lp.system, &tl, &lp.rhs, stop());
            let (_, c) = cg(&lp.system, &lp.rhs, stop());
            assert!(p.converged && c.converged);
            (p.iterations, c.iterations)
        })
        .collect();
    let elapsed = start.elapsed();
    let pcg_its: Vec<usize> = rows.iter().map(|r| r.0).collect();
    let cg_its: Vec<usize> = rows.iter().map(|r| r.1).collect();
    let ratios: Vec<f64> = cg_its[1..].windows(2).map(|w| w[1] as f64 / w[0] as f64).collect();
    verdict(
        4,
        "preconditioner uniformity",
        pcg_its.iter().all(|&k| k <= 15) && ratios.iter().all(|&r| r >= 1.7) && elapsed < Duration::from_secs(180),
        &format!("pcg {pcg_its:?}, cg {cg_its:?}, cg ratios(l>=2) {ratios:.2?}, {elapsed:.1?}"),
    );
}

#[test]
fn c05_smoothing_monotonicity() {
    use rayon::prelude::*;
    let cases: Vec<(MeshFamily, usize)> = MeshFamily::ALL
        .iter()
        .flat_map(|&f| (1..=5).map(move |l| (f, l)))
        .collect();
    let results: Vec<(MeshFamily, usize, usize, usize)> = cases
        .par_iter()
        .map(|&(f, l)| {
            let n3 = two_level(f, l, SmootherConfig::gauss_seidel(3)).iterations;
            let n5 = two_level(f, l, SmootherConfig::gauss_seidel(5)).iterations;
            (f, l, n3, n5)
        })
        .collect();
    let bad: Vec<_> = results.iter().filter(|r| r.3 > r.2).collect();
    let summary: Vec<String> = results.iter().map(|r| format!("{}{}:{}/{}", r.0, r.1, r.2, r.3)).collect();
    verdict(
        5,
        "smoothing monotonicity",
        bad.is_empty(),
        &format!("nu=3/nu=5 {}", summary.join(" ")),
    );
}

/// Cheeger constant by direct enumeration of vertex subsets, independent of
/// the library's Gray-code walk.
fn cheeger_brute_force(n: usize, edges: &[(usize, usize)], max_degree: usize) -> f64 {
    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << n) - 1 {
        let size = mask.count_ones() as usize;
        let cut = edges
            .iter()
            .filter(|&&(a, b)| ((mask >> a) & 1) != ((mask >> b) & 1))
            .count();
        best = best.min(cut as f64 / size.min(n - size) as f64);
    }
    best / (2.0 * (max_degree as f64).sqrt())
}

#[test]
fn c06_cheeger_bounds() {
    let mut lines = Vec::new();
    let mut lower_ok = true;
    let mut upper_ok = true;
    let mut checked = 0;
    for family in MeshFamily::ALL {
        for initial in 1..=2 {
            for level in 0..=2 {
                let mesh = if level == 0 {
                    generate_initial(family, initial).unwrap()
                } else {
                    generate_level(family, initial, level).unwrap().fine
                };
                let dofs = DofMap::new(&mesh);
                if dofs.n_free() > 24 {
                    continue;
                }
                checked += 1;
                let g = Graph::free_dofs(&mesh, &dofs);
                let cc = cheeger_constant(&g).unwrap();
                let oracle = cheeger_brute_force(g.n_vertices, &g.edges, g.max_degree);
                assert!((cc - oracle).abs() <= 1e-12 * oracle.max(1.0));
                let eig = symmetric_eigenvalues(&assemble_graph_laplacian(&mesh, &dofs).to_dense());
                let (lo, hi) = (eig[0], *eig.last().unwrap());
                lower_ok &= cc * cc <= lo + 1e-10;
                upper_ok &= hi <= g.max_degree as f64 + 1e-10;
                lines.push(format!(
                    "{family} L{initial} l{level}: n={} Cc^2={:.4} lmin={:.4} lmax={:.4} m_d={}",
                    g.n_vertices,
                    cc * cc,
                    lo,
                    hi,
                    g.max_degree
                ));
            }
        }
    }
    assert!(checked > 0);
    verdict(
        6,
        "cheeger bounds",
        lower_ok && upper_ok,
        &format!(
            "lower bound {}, upper bound {}; {}",
            if lower_ok { "holds" } else { "violated" },
            if upper_ok { "holds" } else { "violated" },
            lines.join("; ")
        ),
    );
}

#[test]
fn c07_canonical_form() {
    let cfg = RunConfig::new(MeshFamily::Quad, 1, 1, SolverMode::Pcg);
    let lp = LevelProblem::build(MeshFamily::Quad, 1, 1, cfg.system).unwrap();
    let tl = lp.preconditioner(cfg.coarse, cfg.smoother).unwrap();
    let n = tl.dim();
    assert!(n <= 50, "{n} dofs");

    // B⁻¹ column by column from the cycle, then B by dense inversion
    let mut b_inv = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        b_inv.set_column(j, &DVector::from_vec(tl.apply(&e)));
        e[j] = 0.0;
    }
    let b = b_inv.clone().try_inverse().unwrap();

    // coarse-space minimization with R = post-smoother, M = (I - R A) P
    let a = tl.fine_operator().to_dense();
    let r = dense_smoother(tl.fine_operator(), tl.smoother(), false);
    let rbar = &r + r.transpose() - &r * &a * r.transpose();
    let rbar_inv = rbar.try_inverse().unwrap();
    let p = tl.prolongation().to_dense();
    let bc = tl.coarse_operator().to_dense();
    let m = (DMatrix::identity(n, n) - &r * &a) * &p;
    let normal = m.transpose() * &rbar_inv * &m + &bc;
    let normal = normal.cholesky().unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let v = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let lhs = v.dot(&(&b * &v));
        let vc = normal.solve(&(m.transpose() * &rbar_inv * &v));
        let res = &v - &m * &vc;
        let rhs = vc.dot(&(&bc * &vc)) + res.dot(&(&rbar_inv * &res));
        worst = worst.max((lhs - rhs).abs() / lhs.abs());
    }
    verdict(
        7,
        "canonical form",
        worst <= 1e-9,
        &format!("{n} fine dofs, max relative gap {worst:.2e} over 10 vectors"),
    );
}

#[test]
fn c08_spectral_equivalences() {
    let mut intervals: Vec<[(f64, f64); 3]> = Vec::new();
    for level in 1..=3 {
        let lp = LevelProblem::build(MeshFamily::Quad, 1, level, SystemKind::EdgeForm).unwrap();
        let mesh = lp.mesh();
        let a = lp.edge_form.to_dense();
        let ah = assemble_mfd(mesh, &Coefficient::constant(mesh.n_cells(), 1.0), &lp.fine_dofs)
            .unwrap()
            .to_dense();
        let al = assemble_graph_laplacian(mesh, &lp.fine_dofs).to_dense();
        let p = lp.prolongation().unwrap();
        let h = lp.hierarchy.as_ref().unwrap();
        let cd = lp.coarse_dofs.as_ref().unwrap();
        let a_coarse = build_coarse(CoarseOperatorKind::Galerkin, h, cd, &lp.weights, &p, &lp.edge_form).to_dense();
        let b_coarse =
            build_coarse(CoarseOperatorKind::SparsifiedEdge, h, cd, &lp.weights, &p, &lp.edge_form).to_dense();
        intervals.push([
            generalized_extremes(&ah, &a).unwrap(),
            generalized_extremes(&a, &al).unwrap(),
            generalized_extremes(&a_coarse, &b_coarse).unwrap(),
        ]);
    }
    let rel = |x: f64, y: f64| (y - x).abs() / x.abs();
    let mut worst = 0.0_f64;
    for w in intervals.windows(2) {
        for k in 0..3 {
            worst = worst.max(rel(w[0][k].0, w[1][k].0)).max(rel(w[0][k].1, w[1][k].1));
        }
    }
    let fmt: Vec<String> = intervals
        .iter()
        .enumerate()
        .map(|(i, iv)| {
            format!(
                "l{}: (Ah,A) [{:.3},{:.3}] (A,AL) [{:.3},{:.3}] (AH,BH) [{:.3},{:.3}]",
                i + 1,
                iv[0].0,
                iv[0].1,
                iv[1].0,
                iv[1].1,
                iv[2].0,
                iv[2].1
            )
        })
        .collect();
    verdict(
        8,
        "spectral equivalences",
        worst < 0.3,
        &format!("max change {:.1}%; {}", 100.0 * worst, fmt.join("; ")),
    );
}

#[test]
fn c09_contraction_with_exact_coarse_solve() {
    let mut norms = Vec::new();
    for system in [SystemKind::EdgeForm, SystemKind::Mfd] {
        for family in MeshFamily::ALL {
            let lp = LevelProblem::build(family, 1, 2, system).unwrap();
            let tl = lp
                .preconditioner(CoarseOperatorKind::Galerkin, SmootherConfig::gauss_seidel(1))
                .unwrap();
            let e = a_norm_power(&lp.system, |v| tl.error_propagate(v), 300, 5);
            norms.push((system, family, e));
        }
    }
    let fmt: Vec<String> = norms.iter().map(|(s, f, e)| format!("{s}/{f} {e:.3}")).collect();
    verdict(
        9,
        "contraction with exact coarse solve",
        norms.iter().all(|n| n.2 < 1.0),
        &format!("|E|_A {}", fmt.join(", ")),
    );
}

#[test]
fn c10_discretization_sanity() {
    let errors: Vec<f64> = (1..=4)
        .map(|l| {
            let lp = LevelProblem::build(MeshFamily::Quad, 1, l, SystemKind::Mfd).unwrap();
            let tl = lp
                .preconditioner(CoarseOperatorKind::Galerkin, SmootherConfig::gauss_seidel(2))
                .unwrap();
            let (x, r) = pcg(&lp.system, &tl, &lp.rhs, StoppingRule::new(1e-12, 1000).unwrap());
            assert!(r.converged);
            lp.max_nodal_error(&x)
        })
        .collect();
    verdict(
        10,
        "discretization sanity",
        errors.windows(2).all(|w| w[1] < w[0]),
        &format!("max nodal error l=1..4 {}", sci(&errors)),
    );
}
