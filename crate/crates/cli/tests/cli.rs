use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ku-lattice"))
        .args(args)
        .env_remove("KU_LATTICE_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&full)).unwrap()
}

#[test]
fn euler_examples() {
    assert_eq!(stdout(&["euler", "--variety", "qds", "O", "O(H)"]).trim(), "4");
    assert_eq!(stdout(&["euler", "--variety", "gm3", "O", "O"]).trim(), "1");
    assert_eq!(stdout(&["euler", "--variety", "quartic-k3", "O", "O"]).trim(), "2");
    let v = json(&["euler", "--variety", "quartic-k3", "--gram", "4,1;1,-2", "O_L", "O_L"]);
    assert_eq!(v["chi"], "2");
}

#[test]
fn phi_examples() {
    assert_eq!(stdout(&["phi", "--setup", "qds-line", "O_L"]).trim(), "mu(3, -2)");
    assert_eq!(stdout(&["phi", "--setup", "gm4", "kappa(1,0)"]).trim(), "lambda(1, 0)");
    assert_eq!(stdout(&["phi", "--setup", "qds", "0"]).trim(), "mu(0, 0)");
    let v = json(&["phi", "--setup", "gm3", "--gram", "10,6;6,2", "O_x"]);
    assert_eq!(v["image"]["coords"], serde_json::json!([1, 2]));
}

#[test]
fn lift_examples() {
    let v = json(&["lift", "--fano", "qds", "2", "0"]);
    assert_eq!(v["w_square"], 2);
    let v = json(&["lift", "--fano", "gm3", "0", "1"]);
    assert_eq!(v["gram"], serde_json::json!([[10, 5], [5, 0]]));
    assert_eq!(v["w_square"], -2);
    let v = json(&["lift", "--fano", "qds", "-3", "1", "--box", "4"]);
    assert!(v["search"].as_array().unwrap().iter().any(|f| f["w"] == v["w"]));

    let out = run(&["lift", "--fano", "qds", "0", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero vector"));
}

#[test]
fn image_and_lift_all() {
    let v = json(&["image", "--setup", "qds"]);
    assert_eq!(v["image"]["index"], 2);
    assert_eq!(v["kernel"]["gram"], serde_json::json!([[-4]]));
    let v = json(&["lift-all", "--setup", "qds-line", "2", "0"]);
    assert_eq!((v["max_w_square"].as_i64(), v["holds"].as_bool()), (Some(2), Some(true)));
    let out = run(&["lift-all", "--setup", "qds", "1", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lattice_and_dim() {
    let v = json(&["lattice-check", "--gram", "10,6;6,2"]);
    assert_eq!(v["verdict"], true);
    let v = json(&["lattice-check", "--gram", "10,5;5,2"]);
    assert_eq!(v["verdict"], false);
    assert_eq!(stdout(&["dim", "--basis", "mu", "0", "1"]).trim(), "3");
    assert_eq!(stdout(&["dim", "--basis", "lambda", "--kind", "cy2", "1", "0"]).trim(), "4");
    assert_eq!(stdout(&["dim", "--basis", "kappa", "1", "1"]).trim(), "3");
}

#[test]
fn chern_reports_coordinates() {
    let v = json(&["chern", "--variety", "qds", "3*O - O(H) + O_x"]);
    assert_eq!(v["ku"]["coords"], serde_json::json!([2, -1]));
    let v = json(&["chern", "--variety", "quartic-k3", "--gram", "4,1;1,-2", "O_L"]);
    assert_eq!(v["mukai"], serde_json::json!([0, 0, 1, 1]));
    let v = json(&["chern", "--variety", "qds", "O"]);
    assert_eq!(v["ku"], Value::Null);
}

#[test]
fn user_errors_exit_with_one() {
    for args in [
        vec!["euler", "--variety", "qds", "O(", "O"],
        vec!["euler", "--variety", "nowhere", "O", "O"],
        vec!["euler", "--variety", "quartic-k3", "O(L)", "O"],
        vec!["phi", "--setup", "gm3", "--gram", "10,6;6", "O"],
        vec!["lift", "--fano", "gm3", "-1", "0"],
        vec!["no-such-command"],
    ] {
        assert_eq!(run(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "lift", "--fano", "gm3", "5", "-7", "--box", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn config_file_adds_setups() {
    let path = std::env::temp_dir().join(format!("ku-lattice-config-{}.json", std::process::id()));
    std::fs::write(
        &path,
        r#"{"setups": {"five": {"kind": "gm-threefold", "gram": [[10, 5], [5, 0]]}}}"#,
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ku-lattice"))
        .args(["phi", "--setup", "five", "O(L)"])
        .env("KU_LATTICE_CONFIG", &path)
        .output()
        .unwrap();
    std::fs::remove_file(&path).ok();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // O_S(L) has Mukai vector (1, L, 1) on this lattice.
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "kappa(0, 9)");
}

#[test]
fn verify_paper_passes() {
    let v = json(&["verify-paper"]);
    assert_eq!(v["failed"], 0, "{v:#}");
    assert!(v["passed"].as_u64().unwrap() > 90);
    let v = json(&["verify-paper", "--filter", "qds"]);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["check_id"].as_str().unwrap().contains("qds")));
}
