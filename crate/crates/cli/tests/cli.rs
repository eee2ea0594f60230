use std::fs;
use std::io::BufReader;
use std::process::{Command, Output};

use mfd_twolevel::experiments::CSV_COLUMNS;
use mfd_twolevel::mesh::read_mesh;
use mfd_twolevel::CsrMatrix;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfd-twolevel"))
        .args(args)
        .env("MFDTL_THREADS", "2")
        .output()
        .unwrap()
}

#[test]
fn writes_a_reproducible_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&["--family", "quad,hex", "--level", "1..2", "--mode", "pcg", "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_COLUMNS.join(","));
    assert_eq!(lines.len(), 5);
    // rows come back in family-major, level-minor order
    assert!(lines[1].starts_with("1,quad,1,1,") && lines[4].starts_with("1,hex,1,2,"));
}

#[test]
fn plot_script_references_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let py = dir.path().join("plot.py");
    let out = run(&[
        "--family",
        "tria",
        "--level",
        "1",
        "--out",
        csv.to_str().unwrap(),
        "--plot",
        py.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let script = fs::read_to_string(py).unwrap();
    assert!(script.contains(csv.to_str().unwrap()));
}

#[test]
fn stdout_when_no_output_file() {
    let out = run(&["--family", "quad", "--level", "0", "--mode", "spectral"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().contains(",spectral,"));
}

#[test]
fn failed_rows_give_a_nonzero_exit() {
    let out = run(&["--family", "quad", "--level", "2", "--max-iterations", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no convergence"));
    // the table is still written
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2);
}

#[test]
fn bad_arguments_are_rejected() {
    for args in [
        &["--family", "pentagon"][..],
        &["--level", "3..1"],
        &["--mode", "tg", "--level", "0"],
        &["--smoother", "sor", "--omega", "2.5", "--level", "1"],
        &["--plot", "x.py"],
        &["--export-mesh", "m.txt", "--level", "1..2"],
    ] {
        let out = run(args);
        assert!(!out.status.success(), "{args:?}");
    }
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_mfd-twolevel"))
        .args(["--family", "quad", "--level", "1"])
        .env("MFDTL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("a.txt");
    let g = dir.path().join("mesh.txt");
    let out = run(&[
        "--family",
        "hex",
        "--level",
        "1",
        "--system",
        "mfd",
        "--mode",
        "cg",
        "--export-matrix",
        m.to_str().unwrap(),
        "--export-mesh",
        g.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mesh = read_mesh(BufReader::new(fs::File::open(&g).unwrap())).unwrap();
    let n_free = mesh.vertices.iter().filter(|v| !v.on_boundary).count();
    let a = CsrMatrix::read_coordinate(BufReader::new(fs::File::open(&m).unwrap()), n_free, n_free).unwrap();
    assert_eq!(a.nrows(), n_free);
    assert!(a.symmetry_defect() < 1e-12);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains(&format!(",{n_free},cg,")));
}
