use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use mfd_twolevel::experiments::{emit_plot_script, run_table, write_csv, LevelProblem, RunConfig, SolverMode, SystemKind};
use mfd_twolevel::mesh::write_mesh;
use mfd_twolevel::{CoarseOperatorKind, MeshFamily, SmootherConfig, SmootherKind};

/// Environment variable holding the worker thread count.
const THREADS_ENV: &str = "MFDTL_THREADS";

/// Run two-level MFD experiments and write the results as CSV.
///
/// Every combination of the listed families and levels becomes one row.
#[derive(Debug, Parser)]
#[command(name = "mfd-twolevel", version, about)]
struct Args {
    /// Mesh families, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "tria,quad,hex")]
    family: Vec<MeshFamily>,

    /// Initial mesh level.
    #[arg(long = "L", default_value_t = 1)]
    initial_level: usize,

    /// Fine levels: a number, a range `1..5` or a comma list.
    #[arg(long, default_value = "1..5")]
    level: String,

    #[arg(long, default_value = "gs")]
    smoother: SmootherKind,

    /// SOR relaxation parameter.
    #[arg(long, default_value_t = 1.5)]
    omega: f64,

    /// Smoothing sweeps per step.
    #[arg(long, default_value_t = 2)]
    nu: usize,

    #[arg(long, default_value = "bh")]
    coarse: CoarseOperatorKind,

    /// Fine system: the edge form the preconditioner is built on, or the
    /// MFD stiffness.
    #[arg(long, default_value = "edge")]
    system: SystemKind,

    #[arg(long, default_value = "tg")]
    mode: SolverMode,

    /// Relative residual tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    #[arg(long, default_value_t = 10_000)]
    max_iterations: usize,

    /// CSV output; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write a matplotlib script for the CSV (needs `--out`).
    #[arg(long)]
    plot: Option<PathBuf>,

    /// Write the fine system matrix as `i j value` triplets (single row only).
    #[arg(long)]
    export_matrix: Option<PathBuf>,

    /// Write the fine mesh (single row only).
    #[arg(long)]
    export_mesh: Option<PathBuf>,
}

fn parse_levels(s: &str) -> Result<Vec<usize>> {
    let mut levels = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.trim().parse().with_context(|| format!("bad level range `{part}`"))?;
            let b: usize = b.trim().parse().with_context(|| format!("bad level range `{part}`"))?;
            if a > b {
                bail!("empty level range `{part}`");
            }
            levels.extend(a..=b);
        } else {
            levels.push(part.parse().with_context(|| format!("bad level `{part}`"))?);
        }
    }
    if levels.is_empty() {
        bail!("no levels given");
    }
    Ok(levels)
}

fn configs(args: &Args) -> Result<Vec<RunConfig>> {
    let levels = parse_levels(&args.level)?;
    let smoother = match args.smoother {
        SmootherKind::GaussSeidel => SmootherConfig::gauss_seidel(args.nu),
        SmootherKind::Sor => SmootherConfig::sor(args.omega, args.nu),
        SmootherKind::DampedJacobi => SmootherConfig::jacobi(args.nu),
    };
    let mut out = Vec::new();
    for &family in &args.family {
        for &level in &levels {
            let cfg = RunConfig {
                smoother,
                coarse: args.coarse,
                system: args.system,
                tol: args.tol,
                max_iterations: args.max_iterations,
                ..RunConfig::new(family, args.initial_level, level, args.mode)
            };
            cfg.validate()?;
            out.push(cfg);
        }
    }
    Ok(out)
}

fn export(args: &Args, cfgs: &[RunConfig]) -> Result<()> {
    if args.export_matrix.is_none() && args.export_mesh.is_none() {
        return Ok(());
    }
    let [c] = cfgs else {
        bail!("--export-matrix and --export-mesh need exactly one family and one level");
    };
    let lp = LevelProblem::build(c.family, c.initial_level, c.fine_level, c.system)?;
    if let Some(path) = &args.export_matrix {
        let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        lp.system.write_coordinate(&mut w)?;
        w.flush()?;
    }
    if let Some(path) = &args.export_mesh {
        let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        write_mesh(&mut w, lp.mesh())?;
        w.flush()?;
    }
    Ok(())
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("{THREADS_ENV} must be a positive integer, got `{v}`"))?;
        if n == 0 {
            bail!("{THREADS_ENV} must be a positive integer, got `{v}`");
        }
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

fn run(args: &Args) -> Result<bool> {
    if args.plot.is_some() && args.out.is_none() {
        bail!("--plot needs --out");
    }
    let cfgs = configs(args)?;
    export(args, &cfgs)?;
    let rows = thread_pool()?.install(|| run_table(&cfgs));

    match &args.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
            write_csv(&mut w, &rows)?;
            w.flush()?;
        }
        None => write_csv(&mut io::stdout().lock(), &rows)?,
    }
    if let (Some(script), Some(csv)) = (&args.plot, &args.out) {
        emit_plot_script(csv, script)?;
    }

    let mut ok = true;
    for r in rows.iter().filter(|r| !r.ok()) {
        ok = false;
        let c = &r.config;
        eprintln!(
            "error: {} L={} level={} {}: {}",
            c.family,
            c.initial_level,
            c.fine_level,
            c.mode,
            r.failure.as_deref().unwrap_or_default()
        );
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
