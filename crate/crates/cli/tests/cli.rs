//! End-to-end tests of the binary: exit codes, determinism, report shape.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subspectra"))
}

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_rsl_full_report() {
    let out = run(&["analyze", spec("rsl.toml").to_str().unwrap(), "--kmax", "256"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = stdout_json(&out);
    assert_eq!(r["primitivity"]["witness_power"], 3);
    assert_eq!(r["height"]["height"], 1);
    assert_eq!(r["decomposition"]["classes"][0][0], "00");
    assert_eq!(r["decomposition"]["transient"].as_array().unwrap().len(), 0);
    assert_eq!(r["frequencies"][0], "1/4");
    assert_eq!(
        r["hull"]["forms"],
        serde_json::json!(["w1 + w2 + 2 w3", "w1 + w2 - 2 w3", "w1 - w2"])
    );
    assert_eq!(r["hull"]["vertices"][2], serde_json::json!(["1", "-1", "0"]));
    let verdicts: Vec<&str> = r["rays"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["verdict"].as_str().unwrap())
        .collect();
    assert_eq!(
        verdicts,
        ["pure point", "singular continuous", "singular continuous"]
    );
    assert_eq!(r["weighted"]["label"], "purely singular continuous");
    assert_eq!(r["weighted"]["bragg_at_zero"], "0");
    // Σ̂(1) as printed.
    let entries: Vec<&str> = r["sigma"][1]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_str().unwrap())
        .collect();
    assert_eq!(
        entries,
        ["0", "1/6", "0", "1/12", "0", "0", "1/12", "1/6", "1/6", "1/12", "0", "0", "1/12", "0", "1/6", "0"]
    );
}

#[test]
fn analyze_rs_absolutely_continuous() {
    let out = run(&["analyze", spec("rs.toml").to_str().unwrap(), "--kmax", "256"]);
    assert!(out.status.success());
    let r = stdout_json(&out);
    assert_eq!(r["decomposition"]["transient"].as_array().unwrap().len(), 8);
    assert_eq!(r["weighted"]["label"], "purely absolutely continuous");
    let verdicts: Vec<&str> = r["rays"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["verdict"].as_str().unwrap())
        .collect();
    assert_eq!(verdicts, ["pure point", "Lebesgue"]);
}

#[test]
fn analyze_is_byte_identical_across_runs() {
    let path = spec("rsl.toml");
    let args = ["analyze", path.to_str().unwrap(), "--kmax", "128"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sequence_plain_output() {
    let out = run(&["sequence", "rsl", "8"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "+1 +1 -1 +1 +1 -1 +1 +1\n"
    );
}

#[test]
fn sigma_zero_is_diagonal_quarters() {
    let out = run(&["sigma", spec("rsl.toml").to_str().unwrap(), "0"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("00 1/4"));
    assert!(text.contains("01 0"));
    assert!(text.contains("33 1/4"));
}

#[test]
fn sigma_consistency_flag() {
    let out = run(&["sigma", spec("rsl.toml").to_str().unwrap(), "5", "--p", "3"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("consistency(p=3) true"));
}

#[test]
fn partials_csv_shape() {
    let out = run(&["partials", "rsl", "4^2..4^3"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,sum,ratio,log4_n"));
    assert_eq!(text.lines().count(), 1 + (64 - 16 + 1));
}

#[test]
fn growth_csv_increases_for_rsl() {
    let out = run(&["growth", "rsl", "--n-list", "4^3,4^4,4^5", "--grid-factor", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let ratios: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios.len(), 3);
    assert!(ratios[0] < ratios[1] && ratios[1] < ratios[2]);
}

#[test]
fn parse_error_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[rules]\n").unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_primitive_exit_code_with_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nonprim.toml");
    std::fs::write(
        &path,
        "alphabet = [\"0\", \"1\"]\nlength = 2\n\n[rules]\n0 = [\"0\", \"0\"]\n1 = [\"1\", \"1\"]\n",
    )
    .unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let r = stdout_json(&out);
    assert_eq!(r["primitivity"]["primitive"], false);
    assert_eq!(r["error"]["stage"], "primitivity");
}

#[test]
fn non_injective_rules_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("noninjective.toml");
    std::fs::write(
        &path,
        "alphabet = [\"0\", \"1\"]\nlength = 2\n\n[rules]\n0 = [\"0\", \"1\"]\n1 = [\"0\", \"1\"]\n",
    )
    .unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    let r = stdout_json(&out);
    assert_eq!(r["error"]["stage"], "aperiodicity");
}

#[test]
fn periodogram_memory_cap_env_var() {
    let out = bin()
        .args(["periodogram", "rsl", "1024"])
        .env("SUBSPECTRA_GRID_CAP", "16")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("memory cap"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hull.json");
    let out = run(&[
        "hull",
        spec("rs.toml").to_str().unwrap(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["forms"], serde_json::json!(["w1 + w2", "w1 - w2"]));
}
