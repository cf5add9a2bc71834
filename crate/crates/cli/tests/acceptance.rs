//! Acceptance suite: one test per shipped claim, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them) and enforcing the
//! stated runtime budget where one exists.

use std::process::Command;

use shiftperc_cli::checks::{self, Budget, Check, CheckStatus};
use shiftperc_cli::DEFAULT_SEED;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shiftperc"))
}

fn assert_passed(check: &Check, limit_ms: Option<u128>) {
    println!(
        "ACCEPTANCE {:>2} {}: {} ({} ms) - {}",
        check.id,
        match check.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skip => "SKIP",
        },
        check.name,
        check.millis,
        check.detail,
    );
    assert!(
        check.status == CheckStatus::Pass,
        "criterion {} failed: {}",
        check.id,
        check.detail
    );
    if let Some(limit) = limit_ms {
        assert!(
            check.millis < limit,
            "criterion {} took {} ms (limit {} ms)",
            check.id,
            check.millis,
            limit
        );
    }
}

#[test]
fn acceptance_01_shift_thresholds() {
    let check = checks::criterion_1_shift_thresholds();
    assert_passed(&check, Some(1000));
    // The CLI phrasing: `thresholds --shift-k K` prints both fractions.
    let start = std::time::Instant::now();
    for k in 1..=10i64 {
        let output = binary()
            .args(["thresholds", "--shift-k", &k.to_string()])
            .output()
            .expect("binary runs");
        assert!(output.status.success(), "exit failure at k={k}");
        let stdout = String::from_utf8(output.stdout).unwrap();
        let vertex = shiftperc::exact::format_rational(shiftperc::rational(k - 1, k));
        let edge = shiftperc::exact::format_rational(shiftperc::rational(k, k + 1));
        assert!(
            stdout.contains(&format!("vertex threshold: {vertex} ")),
            "k={k}: missing vertex {vertex} in {stdout:?}"
        );
        assert!(
            stdout.contains(&format!("edge threshold:   {edge} ")),
            "k={k}: missing edge {edge} in {stdout:?}"
        );
    }
    assert!(
        start.elapsed().as_millis() < 1000,
        "CLI sweep over k exceeded 1 s"
    );
}

#[test]
fn acceptance_02_finite_path_bounds() {
    assert_passed(&checks::criterion_2_finite_path_bounds(), Some(1000));
}

#[test]
fn acceptance_03_oracle_attainment() {
    assert_passed(&checks::criterion_3_oracle_attainment(), Some(10_000));
}

#[test]
fn acceptance_04_construction_measures() {
    assert_passed(&checks::criterion_4_construction_measures(), Some(30_000));
}

#[test]
fn acceptance_05_pattern_search() {
    assert_passed(&checks::criterion_5_pattern_search(), None);
}

#[test]
fn acceptance_06_structural_percolation() {
    assert_passed(
        &checks::criterion_6_structural_percolation(DEFAULT_SEED, Budget::Full),
        Some(60_000),
    );
}

#[test]
fn acceptance_07_coupled_monotonicity() {
    assert_passed(
        &checks::criterion_7_coupled_monotonicity(DEFAULT_SEED, Budget::Full),
        None,
    );
}

#[test]
fn acceptance_08_debruijn() {
    assert_passed(
        &checks::criterion_8_debruijn(DEFAULT_SEED, Budget::Full),
        Some(120_000),
    );
}

#[test]
fn acceptance_09_equivalence_classes() {
    assert_passed(&checks::criterion_9_equivalence_classes(DEFAULT_SEED), None);
}

#[test]
fn acceptance_10_lifting() {
    assert_passed(&checks::criterion_10_lifting(), None);
}
