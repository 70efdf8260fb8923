//! Acceptance suite: runs every criterion at its pinned tolerance and
//! prints one pass/fail line per criterion. The same checks back the CLI
//! `selftest` subcommand.
//!
//! Run with `cargo test --release -p radialft --test acceptance -- --nocapture`
//! to see the lines as they complete.

use radialft::selftest::{run_check, CheckOutcome};

fn assert_criterion(id: u32) {
    let CheckOutcome {
        name,
        passed,
        detail,
        ..
    } = run_check(id);
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("{tag} criterion {id:2}: {name} -- {detail}");
    assert!(passed, "criterion {id} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_gaussian_oracle() {
    assert_criterion(1);
}

#[test]
fn criterion_02_poisson_oracle() {
    assert_criterion(2);
}

#[test]
fn criterion_03_summability_kernel_oracle() {
    assert_criterion(3);
}

#[test]
fn criterion_04_kernel_remainder_slopes() {
    assert_criterion(4);
}

#[test]
fn criterion_05_moment_recursion() {
    assert_criterion(5);
}

#[test]
fn criterion_06_convex_asymptotics() {
    assert_criterion(6);
}

#[test]
fn criterion_07_integrability_dichotomy() {
    assert_criterion(7);
}

#[test]
fn criterion_08_l1_comparison_boundedness() {
    assert_criterion(8);
}

#[test]
fn criterion_09_endpoint_counterexample() {
    assert_criterion(9);
}

#[test]
fn criterion_10_inversion_round_trip() {
    assert_criterion(10);
}

#[test]
fn criterion_11_discontinuous_integral() {
    assert_criterion(11);
}

#[test]
fn criterion_12_determinism() {
    assert_criterion(12);
}
