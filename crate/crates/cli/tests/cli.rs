use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_willmore-lab")).args(args).env("WILLMORE_LAB_THREADS", "1").output().expect("binary runs")
}

#[test]
fn passing_suite_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let o = run(&["--surface", "sphere", "--suite", "energies", "--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema"], "willmore-lab/1");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("nx,ny,w,e,total_a,area,gauss_int,w_error"));
    assert_eq!(table.lines().count(), 2);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = run(&["--surface", "inverted-enneper", "--suite", "identities"]);
    let b = run(&["--surface", "inverted-enneper", "--suite", "identities"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failing_check_exits_one() {
    // an 8x8 grid is far from the asymptotic range of the quadrature
    let o = run(&["--surface", "inverted-enneper", "--suite", "convergence", "--grid", "8x8"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn bad_configuration_exits_two() {
    for args in [
        &["--surface", "sphere", "--suite", "nonsense"][..],
        &["--surface", "nowhere", "--suite", "energies"],
        &["--surface", "sphere", "--suite", "energies", "--jet-order", "9"],
        &["--surface", "sphere", "--suite", "energies", "--grid", "12"],
        &["--surface", "sphere", "--suite", "energies", "--precision", "quad"],
        &["--surface", "sphere", "--suite", "branch"],
        &["--suite", "energies"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn dsl_file_surface() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("catenoid.dsl");
    std::fs::write(&f, "(cosh(t) * cos(p), cosh(t) * sin(p), t)\n").unwrap();
    let o = run(&["--dsl-file", f.to_str().unwrap(), "--domain", "cylinder:-2:2", "--suite", "willmore", "--grid", "64x32"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["--dsl-file", f.to_str().unwrap(), "--suite", "willmore"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("line.dsl");
    // rank one everywhere
    std::fs::write(&f, "(t * p, t * p, t * p)\n").unwrap();
    let o = run(&["--dsl-file", f.to_str().unwrap(), "--domain", "cylinder:-1:1", "--suite", "identities"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["aborted"].is_string());
}

#[test]
fn help_documents_csv_columns_and_exit_codes() {
    let o = run(&["--help"]);
    let s = String::from_utf8_lossy(&o.stdout);
    assert!(s.contains("CSV columns") && s.contains("Exit codes") && s.contains("WILLMORE_LAB_THREADS"));
}
