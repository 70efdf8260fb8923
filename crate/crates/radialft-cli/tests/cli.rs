//! End-to-end tests of the binary: flag grammar, output schemas, exit
//! codes, and byte-level determinism.

use std::process::{Command, Output};

fn radialft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radialft"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn transform_emits_fixed_csv_schema_and_is_deterministic() {
    let args = [
        "transform",
        "--profile",
        "family=gaussian",
        "--dim",
        "3",
        "--alpha",
        "1",
        "--r-grid",
        "0.5:8:6:log",
    ];
    let first = radialft(&args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    let body = stdout(&first);
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("r,fhat,err_est,method,truncation_A"));
    assert_eq!(lines.count(), 6);
    // Identical invocation produces byte-identical output.
    let second = radialft(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn transform_values_float_format() {
    let out = radialft(&[
        "transform",
        "--profile",
        "family=exponential",
        "--dim",
        "3",
        "--alpha",
        "1",
        "--r-grid",
        "1:1:1",
        "--method",
        "eq6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    let row = body.lines().nth(1).unwrap();
    // 17 significant digits: d.16-digits e-exponent.
    assert!(
        row.starts_with("1.0000000000000000e0,"),
        "unexpected row: {row}"
    );
    // Value is 8 pi / 4 = 2 pi.
    let fhat: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((fhat - 2.0 * std::f64::consts::PI).abs() < 1e-6);
}

#[test]
fn empty_grid_is_usage_error() {
    let out = radialft(&[
        "transform",
        "--profile",
        "family=gaussian",
        "--dim",
        "3",
        "--alpha",
        "1",
        "--r-grid",
        "1:2:0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("\"kind\":\"usage\""));
}

#[test]
fn unknown_profile_family_is_usage_error_with_json() {
    let out = radialft(&[
        "transform",
        "--profile",
        "family=squircle",
        "--dim",
        "3",
        "--alpha",
        "1",
        "--r-grid",
        "1:2:2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("\"error\""), "stderr: {err}");
    assert!(err.contains("squircle"));
}

#[test]
fn condition_violation_exits_three_and_force_overrides() {
    // Order 1 in n = 3 on (1-t^2)^0.5 makes the weighted derivative blow up
    // at the support end: unbounded variation, hypothesis check fails.
    let base = [
        "transform",
        "--profile",
        "family=bochner_riesz delta=0.5",
        "--dim",
        "3",
        "--alpha",
        "1",
        "--r-grid",
        "1:3:3",
    ];
    let out = radialft(&base);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("condition_violation"));

    let mut forced: Vec<&str> = base.to_vec();
    forced.push("--force");
    let out = radialft(&forced);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
}

#[test]
fn diagnose_reports_endpoint_condition_failure_for_log_profile() {
    let out = radialft(&[
        "diagnose",
        "--profile",
        "family=remark3",
        "--dim",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let body = stdout(&out);
    let parsed: serde_json::Value = serde_json::from_str(&body).unwrap();
    let verdicts = parsed.as_array().unwrap();
    let mut saw_c14_fail = false;
    for v in verdicts {
        let id = v["condition"].as_str().unwrap();
        let status = v["status"].as_str().unwrap();
        assert!(v["evidence"].is_object(), "evidence must be an object");
        if id == "c14" {
            assert_eq!(status, "fail");
            saw_c14_fail = true;
        }
        if ["c1", "c2", "c3", "c4"].contains(&id) {
            assert_eq!(status, "pass", "condition {id} should pass");
        }
    }
    assert!(saw_c14_fail, "report must include the endpoint condition");
}

#[test]
fn profile_file_round_trip() {
    let dir = std::env::temp_dir().join("radialft-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("profile.txt");
    std::fs::write(&path, "family=example1\nalpha=2\nbeta=3\n").unwrap();
    let out = radialft(&[
        "transform",
        "--profile-file",
        path.to_str().unwrap(),
        "--dim",
        "3",
        "--alpha",
        "1",
        "--r-grid",
        "1:4:3",
        "--method",
        "eq6",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
}

#[test]
fn kernels_csv_has_header_and_calibration_comment() {
    let out = radialft(&[
        "kernels",
        "--dim",
        "3",
        "--alpha",
        "1",
        "--r-grid",
        "1:20:4:log",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    assert!(body.starts_with("# alpha ="));
    assert!(body.contains("\nt,Q,q\n"));
    assert_eq!(body.lines().count(), 2 + 4);
}

#[test]
fn invert_recovers_profile_point() {
    let out = radialft(&[
        "invert",
        "--profile",
        "family=example1 alpha=2 beta=2",
        "--dim",
        "3",
        "--alpha",
        "1",
        "--r-grid",
        "0.5:0.5:1",
        "--a-schedule",
        "30,60,120,240",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let body = stdout(&out);
    let row = body.lines().nth(1).unwrap();
    let f0: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((f0 - 0.5625).abs() < 1e-3, "recovered {f0}");
}

#[test]
fn selftest_subset_runs_and_is_deterministic_across_processes() {
    let args = ["selftest", "--criteria", "5,12"];
    let first = radialft(&args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    let body = stdout(&first);
    assert!(body.contains("PASS criterion  5"));
    assert!(body.contains("PASS criterion 12"));
    assert!(body.ends_with("2 of 2 criteria passed\n"));
    let second = radialft(&args);
    assert_eq!(first.stdout, second.stdout, "selftest must be byte-identical");
}

#[test]
fn compare_csv_schema() {
    let out = radialft(&[
        "compare",
        "--profile",
        "family=example1 alpha=2 beta=2",
        "--dim",
        "3",
        "--N-grid",
        "5:15:2",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let body = stdout(&out);
    assert!(body.starts_with("N,lhs,rhs,residual,theta\n"));
    assert!(body.contains("# constant = "));
}

#[test]
fn asymptotic_rejects_nonconvex_profile() {
    let out = radialft(&[
        "asymptotic",
        "--profile",
        "family=example1 alpha=1 beta=3",
        "--dim",
        "3",
        "--r-grid",
        "10:100:3:log",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("condition_violation"));
}
