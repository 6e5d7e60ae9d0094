use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use itercert::report::{strip_timing, REPORT_SCHEMA};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itercert")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn assert_schema_valid(report: &Value) {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
}

#[test]
fn certify_jacobi_on_poisson3() {
    let out = run(&["certify", "--matrix", &data("poisson3.mtx"), "--method", "jacobi"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_schema_valid(&r);
    let rho = r["certificate"]["spectral_radius"].as_f64().unwrap();
    assert!((rho - std::f64::consts::FRAC_PI_4.cos()).abs() < 1e-8);
    assert_eq!(r["certificate"]["verdict"], "Converges");
    assert_eq!(r["validation"]["reached_tol"], 4);
}

#[test]
fn certify_reich_on_poisson3() {
    let out = run(&[
        "certify", "--matrix", &data("poisson3.mtx"), "--method", "gauss-seidel", "--criterion", "reich",
    ]);
    assert!(out.status.success());
    let r = json(&out);
    assert_schema_valid(&r);
    assert_eq!(r["certificate"]["criterion"], "Reich");
    assert_eq!(r["certificate"]["verdict"], "Converges");
}

#[test]
fn solve_gauss_seidel_on_poisson3() {
    let out = run(&[
        "solve", "--matrix", &data("poisson3.mtx"), "--rhs", &data("poisson3_rhs.mtx"), "--method", "gauss-seidel",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_schema_valid(&r);
    assert_eq!(r["trace"]["status"], "ReachedTol");
    assert!(r["trace"]["final_relative_error"].as_f64().unwrap() <= 1e-9);
    let rate = r["trace"]["observed_rate"].as_f64().unwrap();
    assert!((0.49..=0.51).contains(&rate), "rate {rate}");
}

#[test]
fn zero_diagonal_is_a_singular_error() {
    let out = run(&["certify", "--matrix", &data("zero_diag.mtx"), "--method", "jacobi"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("E_SINGULAR:"));
    assert!(out.stdout.is_empty());

    let out = run(&["spectrum", "--matrix", &data("zero_diag.mtx"), "--method", "jacobi"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("E_SINGULAR:"));
}

#[test]
fn missing_file_is_an_io_error() {
    let out = run(&["spectrum", "--matrix", &data("no_such_file.mtx")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("E_IO:"));
}

#[test]
fn rhs_length_mismatch_is_a_dimension_error() {
    let out = run(&["solve", "--matrix", &data("zero_diag.mtx"), "--rhs", &data("poisson3_rhs.mtx")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("E_DIM:"));
}

#[test]
fn bad_tolerance_is_a_usage_error() {
    let out = run(&["poisson", "--n", "3", "--tol", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("E_USAGE:"));
}

#[test]
fn diverging_solve_needs_force() {
    // a wrong-length right-hand side is rejected before certification
    let args = ["solve", "--matrix", &data("indefinite.mtx"), "--rhs", &data("poisson3_rhs.mtx")];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let rhs = dir.path().join("b.mtx");
    std::fs::write(&rhs, "%%MatrixMarket matrix array real general\n2 1\n1\n1\n").unwrap();
    let rhs = rhs.display().to_string();
    let out = run(&["solve", "--matrix", &data("indefinite.mtx"), "--rhs", &rhs]);
    assert_eq!(out.status.code(), Some(4));
    let r = json(&out);
    assert_schema_valid(&r);
    assert_eq!(r["certificate"]["verdict"], "Diverges");
    assert!(r["trace"].is_null());

    let out = run(&["solve", "--matrix", &data("indefinite.mtx"), "--rhs", &rhs, "--force"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["trace"]["status"], "Diverged");
}

#[test]
fn spectrum_of_the_matrix_itself() {
    let out = run(&["spectrum", "--matrix", &data("poisson3.mtx"), "--method", "none"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_schema_valid(&r);
    let eigs = r["spectrum"]["eigenvalues"].as_array().unwrap();
    assert_eq!(eigs.len(), 3);
    // 32 - 32 cos(j pi / 4), largest first
    let top = eigs[0]["re"].as_f64().unwrap();
    assert!((top - (32.0 + 32.0 * std::f64::consts::FRAC_PI_4.cos())).abs() < 1e-10);
}

#[test]
fn poisson_reports_are_deterministic() {
    let args = ["poisson", "--n", "3", "--method", "jacobi", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success() && b.status.success());
    let a = String::from_utf8(a.stdout).unwrap();
    let b = String::from_utf8(b.stdout).unwrap();
    assert_eq!(strip_timing(&a).unwrap(), strip_timing(&b).unwrap());
    assert_schema_valid(&serde_json::from_str(&a).unwrap());
}

#[test]
fn table_output_is_plain_text() {
    let out = run(&["poisson", "--n", "4", "--method", "gauss-seidel", "--output", "table"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict        Converges (Reich)"), "{text}");
}
