//! End-to-end checks of the qclass binary.

use std::io::Write;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qclass"))
}

#[test]
fn builtin_prints_the_shipped_scenario() {
    let out = bin().args(["builtin", "pauli-triple"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["dim"], 2);
    assert!(parsed["observables"]["sy"].is_array());
}

#[test]
fn unknown_builtin_fails() {
    let out = bin().args(["builtin", "nope"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("pauli-triple"));
}

#[test]
fn run_accepts_a_scenario_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{
            "dim": 2,
            "observables": {{ "sz": [[[1,0],[0,0]],[[0,0],[-1,0]]] }},
            "states": {{ "up": [[[1,0],[0,0]],[[0,0],[0,0]]] }},
            "requests": [ {{ "type": "table", "state": "up", "observables": ["sz"] }} ]
        }}"#
    )
    .unwrap();
    let out = bin()
        .args(["run", file.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["failures"].as_array().unwrap().len(), 0);
    let rows = doc["reports"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["weight"], 1.0);
}

#[test]
fn invalid_scenario_fails_with_context() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{
            "dim": 2,
            "observables": {{ "bad": [[[0,0],[1,0]],[[0,0],[0,0]]] }},
            "states": {{}},
            "requests": []
        }}"#
    )
    .unwrap();
    let out = bin()
        .args(["run", file.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bad"), "stderr: {stderr}");
    assert!(stderr.contains("Hermitian"), "stderr: {stderr}");
}

#[test]
fn atom_budget_env_var_is_honored() {
    let out = bin()
        .args(["run", "pauli-triple"])
        .env("QCLASS_ATOM_BUDGET", "4")
        .output()
        .unwrap();
    // The triple-Pauli table needs 8 atoms; a budget of 4 must fail the
    // affected requests and surface a machine-readable failure list.
    assert!(!out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let failures = doc["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    assert!(failures[0]["message"]
        .as_str()
        .unwrap()
        .contains("budget"));
}

#[test]
fn audit_subcommand_reports_checks() {
    let out = bin().args(["audit", "singlet-chsh"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("ok   reorder-consistency")));
    assert!(text.lines().any(|l| l.contains("checks, 0 failed")));
    assert!(!text.contains("FAIL"));
}

#[test]
fn out_dir_receives_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "mixture-demo", "--format", "csv", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("request_00_table.csv").exists());
    assert!(dir.path().join("summary.json").exists());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["failures"].as_array().unwrap().len(), 0);
}
