//! CLI contract: exit codes, determinism, and the report formats.

use std::process::{Command, Output};

fn subcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subcheck"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn acceptance_8_deterministic_json_run() {
    let args = [
        "verify",
        "--example",
        "hopf_s3",
        "--checks",
        "all",
        "--format",
        "json",
    ];
    let first = subcheck(&args);
    let second = subcheck(&args);
    let passed = first.status.code() == Some(0)
        && second.status.code() == Some(0)
        && first.stdout == second.stdout
        && !first.stdout.is_empty();
    println!(
        "[criterion 8: CLI determinism] {}: exit {:?}/{:?}, byte-identical JSON across two runs: {}",
        if passed { "PASS" } else { "FAIL" },
        first.status.code(),
        second.status.code(),
        first.stdout == second.stdout
    );
    assert!(passed);
    // overall pass flag set in the document
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
}

#[test]
fn exit_code_two_on_unknown_example() {
    let out = subcheck(&["verify", "--example", "nonexistent", "--checks", "all"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_two_on_unknown_check() {
    let out = subcheck(&["verify", "--example", "hopf_s3", "--checks", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_two_on_unmet_precondition() {
    // the Kähler-base criterion refuses structures outside its hypothesis
    let out = subcheck(&[
        "verify",
        "--example",
        "hopf_s3",
        "--checks",
        "kahler_base_criterion",
        "--points",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_one_on_failing_check() {
    // δΦ = 2η on the Sasakian sphere: harmonicity fails by the value 2
    let out = subcheck(&[
        "verify",
        "--example",
        "hopf_s3",
        "--checks",
        "harmonicity",
        "--points",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL"));
}

#[test]
fn json_report_round_trips_and_carries_conventions() {
    let out = subcheck(&[
        "verify",
        "--example",
        "warped_quadratic",
        "--checks",
        "warped_t,umbilical_fibres",
        "--points",
        "10",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let reserialized = serde_json::to_value(&v).unwrap();
    assert_eq!(v, reserialized);
    assert_eq!(v["config"]["example"], "warped_quadratic");
    assert_eq!(v["config"]["points"], 10);
    assert_eq!(v["config"]["seed"], 42);
    assert!(v["conventions"]["curvature_sign"]
        .as_str()
        .unwrap()
        .contains("unit round sphere"));
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    for c in checks {
        assert_eq!(c["passed"], serde_json::Value::Bool(true));
        assert!(c["residual_max"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap());
    }
}

#[test]
fn text_report_has_one_line_per_check() {
    let out = subcheck(&[
        "verify",
        "--example",
        "olszak_exp",
        "--checks",
        "structure_axioms,harmonicity,n3_witness",
        "--points",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["structure_axioms", "harmonicity", "n3_witness"] {
        assert_eq!(
            text.lines().filter(|l| l.starts_with(name)).count(),
            1,
            "expected exactly one line for {name}"
        );
    }
    assert!(text.trim_end().ends_with("overall: pass"));
}

#[test]
fn out_flag_writes_file_instead_of_stdout() {
    let dir = std::env::temp_dir().join("subcheck_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = subcheck(&[
        "verify",
        "--example",
        "olszak_constant",
        "--checks",
        "structure_axioms",
        "--points",
        "5",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let data = std::fs::read(&path).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&data).unwrap();
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
    std::fs::remove_file(&path).ok();
}

#[test]
fn list_enumerates_examples_and_checks() {
    let out = subcheck(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["hopf_s3", "warped_quadratic", "olszak_exp", "flat_r5"] {
        assert!(text.contains(name), "missing {name}");
    }
    assert!(text.contains("structure_equation"));
    assert!(text.contains("curvature_vertical"));
}

#[test]
fn tol_flag_overrides_every_check() {
    // an absurdly tight tolerance makes even machine-precision residuals fail
    let out = subcheck(&[
        "verify",
        "--example",
        "hopf_s3",
        "--checks",
        "ad_fd_consistency",
        "--points",
        "5",
        "--tol",
        "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(1));
}
