use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("tests/data/specs/{name}.json"))
}

fn quatcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatcalc"))
        .args(args)
        .output()
        .unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

fn path(name: &str) -> String {
    spec(name).display().to_string()
}

#[test]
fn cauchy_subcommand_reports_contour() {
    let o = quatcalc(&[
        "cauchy",
        "--spec",
        &path("exp"),
        "--q",
        "0.2",
        "0",
        "0.7",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["contour", "error_estimate", "nodes_used", "value"]);
    assert_eq!(v["contour"]["circles"].as_array().unwrap().len(), 2);
    assert!(v["error_estimate"].as_f64().unwrap() < 1e-11);
    // exp(0.2 + 0.7k) = e^0.2 (cos 0.7 + k sin 0.7)
    let val = v["value"].as_array().unwrap();
    assert!((val[0].as_f64().unwrap() - 0.2f64.exp() * 0.7f64.cos()).abs() < 1e-12);
    assert!((val[2].as_f64().unwrap() - 0.2f64.exp() * 0.7f64.sin()).abs() < 1e-12);
}

#[test]
fn check_regular_report_schema() {
    let o = quatcalc(&[
        "check-regular",
        "--spec",
        &path("quaternion_poly"),
        "--samples",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["h", "max_residual", "pass", "samples"]);
    assert_eq!(v["samples"], 50);
    assert_eq!(v["pass"], true);
}

#[test]
fn check_regular_fails_with_tiny_tolerance() {
    let o = quatcalc(&[
        "check",
        "--spec",
        &path("exp"),
        "--what",
        "regular",
        "--tol",
        "1e-15",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["pass"], false);
}

#[test]
fn seed_changes_samples_but_runs_are_reproducible() {
    let exp = path("exp");
    let run = |seed: &str| quatcalc(&["check-regular", "--spec", &exp, "--seed", seed]).stdout;
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
}

#[test]
fn taylor_route_and_expansion_point() {
    let o = quatcalc(&[
        "eval",
        "--spec",
        &path("exp"),
        "--q",
        "0.5",
        "0.3",
        "0",
        "0",
        "--route",
        "taylor",
        "--s0",
        "0.4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["route"], "taylor");
    assert_eq!(v["taylor"]["s0"], 0.4);
    assert_eq!(v["is_quaternion"], true);

    // ‖q - s0‖ beyond the distance to the boundary
    let o = quatcalc(&[
        "eval",
        "--spec",
        &path("exp"),
        "--q",
        "0",
        "2.5",
        "0",
        "0",
        "--route",
        "taylor",
        "--s0",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn csv_route_table() {
    let o = quatcalc(&[
        "--format",
        "csv",
        "eval",
        "--spec",
        &path("identity"),
        "--q",
        "0",
        "1",
        "0",
        "0",
        "--route",
        "all",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "route,re_w,re_x,re_y,re_z,im_w,im_x,im_y,im_z,is_quaternion"
    );
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("spectral,0.0,1.0,0.0,0.0,"));
    for l in &lines[1..] {
        assert_eq!(l.split(',').count(), 10);
    }
}

#[test]
fn bad_inputs_exit_2() {
    let missing = quatcalc(&[
        "eval",
        "--spec",
        "/nonexistent.json",
        "--q",
        "0",
        "0",
        "0",
        "0",
    ]);
    assert_eq!(missing.status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("quatcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{"kind":"polynomial","coeffs":[],"domain":{"pieces":[]}}"#,
    )
    .unwrap();
    let o = quatcalc(&[
        "eval",
        "--spec",
        bad.to_str().unwrap(),
        "--q",
        "0",
        "0",
        "0",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let o = quatcalc(&["eval", "--spec", &path("exp"), "--q", "0", "0", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spectrum_outside_domain_exit_3() {
    let o = quatcalc(&[
        "eval",
        "--spec",
        &path("unit_disk"),
        "--q",
        "0",
        "0.6",
        "0.6",
        "0.6",
        "--route",
        "cauchy",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn nonconvergence_exit_4() {
    // the integrand overflows to inf on the contour, so successive
    // trapezoidal sums never settle
    let dir = std::env::temp_dir().join(format!("quatcalc-cli-nc-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let huge = dir.join("huge.json");
    std::fs::write(
        &huge,
        r#"{"kind":"polynomial","coeffs":[[0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0],[1e308,0,0,0,0,0,0,0]],"domain":{"pieces":[{"disk":{"center":[0,0],"radius":5}}]}}"#,
    )
    .unwrap();
    let o = quatcalc(&[
        "cauchy",
        "--spec",
        huge.to_str().unwrap(),
        "--q",
        "0",
        "3",
        "0",
        "0",
    ]);
    assert_eq!(
        o.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}
