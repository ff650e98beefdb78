//! Acceptance suite: every criterion runs at its pinned tolerance and
//! prints one pass/fail line. `coshtrans verify` runs the same bundle.

use coshtrans_cli::acceptance::*;

fn run(result: CriterionResult) {
    println!("{}", result.summary_line());
    for d in &result.details {
        println!("    {d}");
    }
    assert!(result.pass, "{}", result.details.join("\n"));
}

#[test]
fn criterion_01_uniform_closed_form() {
    run(criterion_1());
}

#[test]
fn criterion_02_error_function_identity() {
    run(criterion_2());
}

#[test]
fn criterion_03_factorial_growth() {
    run(criterion_3());
}

#[test]
fn criterion_04_support_trio() {
    run(criterion_4());
}

#[test]
fn criterion_05_bmv_family() {
    run(criterion_5());
}

#[test]
fn criterion_06_counterexample_bundle() {
    run(criterion_6());
}

#[test]
fn criterion_07_unbounded_regime() {
    run(criterion_7());
}

#[test]
fn criterion_08_norm_formula() {
    run(criterion_8());
}

#[test]
fn criterion_09_measure_recovery_round_trip() {
    run(criterion_9());
}

#[test]
fn criterion_10_stieltjes_hankel_soundness() {
    run(criterion_10());
}

#[test]
fn criterion_11_sot_continuity_trend() {
    run(criterion_11());
}

#[test]
fn criterion_12_classifier_shortcuts() {
    run(criterion_12());
}
