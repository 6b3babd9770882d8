//! End-to-end tests of the command line interface, driving the compiled
//! binary against the descriptor fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn qhsw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhsw"))
        .args(args)
        .env_remove("QHSW_MAX_DIM")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 output")
}

#[test]
fn capacity_reports_the_closed_form_value() {
    let input = fixture("qubit_unital.json");
    let out = qhsw(&["capacity", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("capacity_bits: 0.713603"), "{text}");
    assert!(
        text.contains("closed_form_capacity_bits: 0.713603"),
        "{text}"
    );
    assert!(text.contains("min_output_entropy_bits: 0.286397"), "{text}");
    assert!(text.contains("estimator: min_output_entropy"), "{text}");
    assert!(text.contains("argmin_input_bloch: "), "{text}");
    assert!(text.contains("converged: true"), "{text}");
}

#[test]
fn capacity_oracle_cross_check_passes() {
    let input = fixture("qubit_unital.json");
    let out = qhsw(&["capacity", "--input", input.to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("oracle_chi_bits: 0.713603"), "{text}");
    assert!(text.contains("check equal_distance: PASS"), "{text}");
    assert!(text.contains("check maximal_distance: PASS"), "{text}");
    assert!(
        text.contains("check average_output_uniform: PASS"),
        "{text}"
    );
}

#[test]
fn affine_channels_use_the_ensemble_estimator() {
    let input = fixture("measure_prepare_qubit.json");
    let out = qhsw(&["capacity", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("estimator: ensemble"), "{text}");
    assert!(text.contains("capacity_bits: 0.124629"), "{text}");
    assert!(
        text.contains("average_output_bloch: [0.000000, 0.000000, 0.212475]"),
        "{text}"
    );
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let input = fixture("qubit_unital.json");
    let args = [
        "capacity",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
        "--seed",
        "7",
    ];
    let first = qhsw(&args);
    let second = qhsw(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let parsed: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(parsed["options"]["seed"], 7);
    assert_eq!(parsed["channel"]["dim"], 2);
    assert!(parsed["capacity_bits"].as_f64().unwrap() > 0.71);
}

#[test]
fn malformed_descriptors_fail_with_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n \"type\": \"diagonal_unital\",\n \"d\": oops\n}").unwrap();
    let out = qhsw(&["capacity", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn missing_input_file_is_a_usage_error() {
    let out = qhsw(&["capacity", "--input", "/nonexistent/channel.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read"), "{}", stderr(&out));
}

#[test]
fn capacity_refuses_channels_that_are_not_completely_positive() {
    let input = fixture("non_cp_qubit.json");
    let out = qhsw(&["capacity", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("not completely positive"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn verify_reports_expected_construction_failures_as_success() {
    let input = fixture("non_cp_qubit.json");
    let out = qhsw(&["verify", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("construction failed as expected"), "{text}");
}

#[test]
fn verify_with_escape_hatch_reports_the_failing_check() {
    let input = fixture("non_cp_qubit.json");
    let out = qhsw(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--allow-non-cp",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("check complete_positivity: FAIL"), "{text}");
    assert!(text.contains("all_pass: false"), "{text}");
    assert!(text.contains("as_expected: true"), "{text}");
}

#[test]
fn verify_flags_non_unital_affine_channels_as_expected() {
    let input = fixture("measure_prepare_qubit.json");
    let out = qhsw(&["verify", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("check complete_positivity: PASS"), "{text}");
    assert!(text.contains("check unitality: FAIL"), "{text}");
    assert!(text.contains("check equal_distance: PASS"), "{text}");
    assert!(
        text.contains("check average_output_uniform: FAIL"),
        "{text}"
    );
    assert!(text.contains("as_expected: true"), "{text}");
}

#[test]
fn verify_passes_clean_channels() {
    for name in [
        "qubit_unital.json",
        "qubit_identity.json",
        "qubit_point.json",
        "qutrit_identity.json",
        "qutrit_point.json",
        "qutrit_weyl_mixture.json",
        "product_qubit_pair.json",
    ] {
        let input = fixture(name);
        let out = qhsw(&["verify", "--input", input.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
        let text = stdout(&out);
        assert!(text.contains("optimizer_converged: true"), "{name}: {text}");
        assert!(text.contains("all_pass: true"), "{name}: {text}");
    }
}

#[test]
fn truncated_verification_exits_with_the_convergence_code() {
    let input = fixture("qubit_unital.json");
    let out = qhsw(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--max-iters",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    assert!(
        stdout(&out).contains("optimizer_converged: false"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn truncated_optimization_exits_with_the_convergence_code() {
    let input = fixture("qubit_unital.json");
    let out = qhsw(&[
        "capacity",
        "--input",
        input.to_str().unwrap(),
        "--max-iters",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    assert!(
        stdout(&out).contains("converged: false"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn dimension_cap_environment_variable_is_enforced() {
    let input = fixture("qutrit_identity.json");
    let out = Command::new(env!("CARGO_BIN_EXE_qhsw"))
        .args(["capacity", "--input", input.to_str().unwrap()])
        .env("QHSW_MAX_DIM", "2")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("exceeds the limit 2"),
        "{}",
        stderr(&out)
    );

    let ok = Command::new(env!("CARGO_BIN_EXE_qhsw"))
        .args(["verify", "--input", input.to_str().unwrap()])
        .env("QHSW_MAX_DIM", "3")
        .output()
        .expect("binary runs");
    assert_eq!(ok.status.code(), Some(0), "stderr: {}", stderr(&ok));
}

#[test]
fn reports_can_be_written_to_a_file() {
    let input = fixture("qubit_unital.json");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let direct = qhsw(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let to_file = qhsw(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, direct.stdout);
}

#[test]
fn algebra_check_passes_for_the_default_dimensions() {
    let out = qhsw(&["algebra-check"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("all_pass: true"), "{text}");
    assert!(text.contains("irreducibility d=5: PASS"), "{text}");
}

#[test]
fn algebra_check_rejects_dimension_one() {
    let out = qhsw(&["algebra-check", "--dims", "1"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("at least 2"), "{}", stderr(&out));
}

#[test]
fn product_command_exhibits_additivity() {
    let input = fixture("product_qubit_pair.json");
    let out = qhsw(&[
        "product",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let residual = parsed["additivity_residual"].as_f64().unwrap();
    assert!(residual < 1e-6, "additivity residual {residual}");
    assert_eq!(parsed["factor_capacities"].as_array().unwrap().len(), 2);

    let not_product = fixture("qubit_unital.json");
    let rejected = qhsw(&["product", "--input", not_product.to_str().unwrap()]);
    assert_eq!(rejected.status.code(), Some(2));
}
