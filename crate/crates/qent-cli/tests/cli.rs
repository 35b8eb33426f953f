//! End-to-end tests of the `qent` binary: subcommand behavior, JSON reports,
//! exit codes, and byte-level determinism.

use assert_cmd::Command;
use predicates::prelude::*;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

fn write_state(dir: &Path, name: &str, dims: &[usize], amps: &[[f64; 2]]) -> PathBuf {
    let path = dir.join(name);
    let body = json!({ "dims": dims, "amplitudes": amps });
    std::fs::write(&path, serde_json::to_string_pretty(&body).unwrap()).unwrap();
    path
}

fn qent() -> Command {
    Command::cargo_bin("qent").unwrap()
}

const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn ghz_file(dir: &Path) -> PathBuf {
    let mut amps = [[0.0, 0.0]; 8];
    amps[0] = [S, 0.0];
    amps[7] = [S, 0.0];
    write_state(dir, "ghz.json", &[2, 2, 2], &amps)
}

fn output_json(cmd: &mut Command) -> Value {
    let out = cmd.assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).expect("stdout is a JSON report")
}

#[test]
fn classify_ghz_is_stable_with_unit_concurrence() {
    let dir = tempfile::tempdir().unwrap();
    let state = ghz_file(dir.path());
    let report = output_json(
        qent()
            .args(["classify", "--system", "local:2x2x2", "--json", "--state"])
            .arg(&state),
    );
    assert_eq!(report["result"]["stability"], "stable");
    let mu = report["result"]["concurrence"].as_f64().unwrap();
    assert!((mu - 1.0).abs() < 1e-9, "concurrence {mu}");
    assert_eq!(report["command"], "classify");
    assert_eq!(report["system"], "local:2x2x2");
}

#[test]
fn pentagram_search_on_axis_state_violates() {
    let dir = tempfile::tempdir().unwrap();
    // Spin-1 |0>: the real vector along ẑ, completely entangled.
    let state = write_state(dir.path(), "axis.json", &[3], &[[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]);
    let report = output_json(qent().args(["pentagram", "--json", "--state"]).arg(&state));
    let value = report["result"]["bell_value"].as_f64().unwrap();
    assert!((value - 2.236068).abs() < 1e-5, "bell value {value}");
    assert_eq!(report["result"]["violated"], true);
    // J² form identity: j²(ψ) = 5 − bell value.
    let jsq = report["result"]["jsquare_form"].as_f64().unwrap();
    assert!((jsq - (5.0 - value)).abs() < 1e-9);
}

#[test]
fn pentagram_with_explicit_angles_reports_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_state(dir.path(), "axis.json", &[3], &[[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]);
    let report = output_json(
        qent()
            .args(["pentagram", "--angles", "0.3,1.1,-0.4,0.8,1.9", "--json", "--state"])
            .arg(&state),
    );
    let spectrum = report["result"]["spectrum"].as_array().unwrap();
    let trace: f64 = spectrum.iter().map(|v| v.as_f64().unwrap()).sum();
    assert!((trace - 5.0).abs() < 1e-9, "trace {trace}");
}

#[test]
fn chsh_singlet_with_default_directions_is_optimal() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_state(
        dir.path(),
        "singlet.json",
        &[2, 2],
        &[[0.0, 0.0], [S, 0.0], [-S, 0.0], [0.0, 0.0]],
    );
    let report = output_json(qent().args(["chsh", "--json", "--state"]).arg(&state));
    let value = report["result"]["chsh_value"].as_f64().unwrap();
    assert!((value - (2.0 - 2.0 * 2f64.sqrt())).abs() < 1e-9, "chsh {value}");
    assert_eq!(report["result"]["violated"], true);
}

#[test]
fn schmidt_of_bell_state_reports_one_ebit() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_state(
        dir.path(),
        "bell.json",
        &[2, 2],
        &[[S, 0.0], [0.0, 0.0], [0.0, 0.0], [S, 0.0]],
    );
    let report = output_json(qent().args(["schmidt", "--json", "--state"]).arg(&state));
    let entropy = report["result"]["entropy_bits"].as_f64().unwrap();
    assert!((entropy - 1.0).abs() < 1e-10, "entropy {entropy}");
}

#[test]
fn invariants_of_ghz_give_unit_tangle() {
    let dir = tempfile::tempdir().unwrap();
    let state = ghz_file(dir.path());
    let report = output_json(qent().args(["invariants", "--json", "--state"]).arg(&state));
    let entries = report["result"].as_array().unwrap();
    let hyper = entries
        .iter()
        .find(|e| e["three_tangle"].is_number())
        .expect("2x2x2 entry present");
    let tau = hyper["three_tangle"].as_f64().unwrap();
    assert!((tau - 1.0).abs() < 1e-12, "tangle {tau}");
    assert!((hyper["derived_concurrence"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn majorana_of_spin1_zero_state_lists_pole_roots() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_state(dir.path(), "zero.json", &[3], &[[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]);
    let report = output_json(qent().args(["majorana", "--json", "--state"]).arg(&state));
    assert_eq!(report["result"]["infinity_multiplicity"], 1);
    let finite = report["result"]["finite_roots"].as_array().unwrap();
    assert_eq!(finite.len(), 1);
    assert!(finite[0][0].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(report["result"]["multiplicity_class"], "semistable_not_stable");
    let balance = report["result"]["balance_residual"].as_f64().unwrap();
    assert!(balance < 1e-12);
}

#[test]
fn variance_of_coherent_state_is_flagged_coherent() {
    let dir = tempfile::tempdir().unwrap();
    // Spin-1 highest weight |+1>: a coherent state with variance s = 1.
    let state = write_state(dir.path(), "top.json", &[3], &[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]);
    let report = output_json(qent().args(["variance", "--json", "--state"]).arg(&state));
    assert_eq!(report["result"]["coherence_verdict"], "coherent");
    let total = report["result"]["total_variance"].as_f64().unwrap();
    assert!((total - 1.0).abs() < 1e-10, "variance {total}");
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let state = ghz_file(dir.path());
    let run = || {
        qent()
            .args(["classify", "--json", "--seed", "7", "--state"])
            .arg(&state)
            .assert()
            .success()
            .get_output()
            .stdout
            .clone()
    };
    assert_eq!(run(), run());

    let axis = write_state(dir.path(), "axis.json", &[3], &[[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]);
    let search = || {
        qent()
            .args(["pentagram", "--json", "--seed", "7", "--state"])
            .arg(&axis)
            .assert()
            .success()
            .get_output()
            .stdout
            .clone()
    };
    assert_eq!(search(), search());
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let state = ghz_file(dir.path());

    // Missing --state.
    qent()
        .args(["classify"])
        .assert()
        .code(1)
        .stderr(predicate::str::contains("--state"));

    // Unrecognized system descriptor.
    qent()
        .args(["classify", "--system", "bogus:3", "--state"])
        .arg(&state)
        .assert()
        .code(1)
        .stderr(predicate::str::contains("unrecognized system"));

    // Dimension mismatch between system and state.
    qent()
        .args(["classify", "--system", "spin:2", "--state"])
        .arg(&state)
        .assert()
        .code(1)
        .stderr(predicate::str::contains("does not match"));

    // Unknown subcommand.
    qent().args(["frobnicate"]).assert().code(1);

    // Malformed state file.
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    qent().args(["classify", "--state"]).arg(&bad).assert().code(1);

    // Unknown key in the params file.
    let params = dir.path().join("params.json");
    std::fs::write(&params, r#"{"stepp": 0.4}"#).unwrap();
    qent()
        .args(["classify", "--params"])
        .arg(&params)
        .args(["--state"])
        .arg(&state)
        .assert()
        .code(1);

    // Unnormalized state without the flag.
    let unnorm = write_state(dir.path(), "unnorm.json", &[2], &[[2.0, 0.0], [0.0, 0.0]]);
    qent()
        .args(["variance", "--system", "spin:1", "--state"])
        .arg(&unnorm)
        .assert()
        .code(1)
        .stderr(predicate::str::contains("unnormalized"));
}

#[test]
fn exhausted_search_budget_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    // Nearly coherent spin-1 state (φ just above the coherent margin): its
    // maximal Bell value stays below 2, so no pentagram can violate and the
    // search must report an inconclusive budget exhaustion.
    let phi = std::f64::consts::FRAC_PI_4 - 1e-3;
    let (c, s) = (phi.cos(), phi.sin());
    let state = write_state(
        dir.path(),
        "near_coherent.json",
        &[3],
        &[[-(c + s) * S, 0.0], [0.0, 0.0], [(c - s) * S, 0.0]],
    );
    let params = dir.path().join("params.json");
    std::fs::write(&params, r#"{"search_budget": 200}"#).unwrap();
    qent()
        .args(["pentagram", "--params"])
        .arg(&params)
        .args(["--state"])
        .arg(&state)
        .assert()
        .code(3);
}

#[test]
fn non_finite_flow_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // Generic spin-1 state with a nonzero expectation vector: an absurd step
    // size overflows exp(-eta*<J>.J) on the negative-weight components.
    let a = (0.8f64).sqrt();
    let b = (0.2f64).sqrt();
    let state = write_state(dir.path(), "tilted.json", &[3], &[[a, 0.0], [0.0, 0.0], [b, 0.0]]);
    let params = dir.path().join("params.json");
    std::fs::write(&params, r#"{"step": 1e300, "backtracking": 0.99}"#).unwrap();
    qent()
        .args(["classify", "--params"])
        .arg(&params)
        .args(["--state"])
        .arg(&state)
        .assert()
        .code(2)
        .stderr(predicate::str::contains("non-finite"));
}

#[test]
fn help_and_version_exit_zero() {
    qent().arg("--help").assert().code(0).stdout(predicate::str::contains("classify"));
    qent().arg("--version").assert().code(0);
}

#[test]
fn selftest_with_loose_grad_tol_fails_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("params.json");
    std::fs::write(&params, r#"{"grad_tol": 1e-2}"#).unwrap();
    qent()
        .args(["selftest", "--params"])
        .arg(&params)
        .assert()
        .code(1)
        .stdout(predicate::str::contains("FAIL"));
}
