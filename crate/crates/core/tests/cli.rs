use std::process::{Command, Output};

use serde_json::Value;

fn cactus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cactus")).args(args).env_remove("CACTUS_MAX_COSETS").output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = cactus(&all);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (v, out.status.code().unwrap())
}

fn assert_manifest(v: &Value) {
    for key in ["command", "build", "parameters", "config", "results", "wall_time_s", "verdicts"] {
        assert!(v.get(key).is_some(), "manifest lacks {key}: {v}");
    }
    for verdict in v["verdicts"].as_array().unwrap() {
        assert!(verdict["claim"].is_string() && verdict["source"].is_string(), "{verdict}");
        assert!(verdict.get("computed").is_some(), "{verdict}");
    }
}

#[test]
fn present_prints_gap_text_and_json() {
    let out = cactus(&["present", "--pres", "minimal", "-n", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("g2") && text.contains("g4"), "{text}");
    let (v, code) = json(&["present", "--pres", "minimal", "-n", "4"]);
    assert_eq!(code, 0);
    assert_manifest(&v);
}

#[test]
fn counts_agree_and_write_csv() {
    let dir = std::env::temp_dir().join(format!("cactus-counts-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("counts.csv");
    let (v, code) = json(&["counts", "--n-from", "2", "--n-to", "8", "--csv", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_manifest(&v);
    assert!(v["verdicts"].as_array().unwrap().iter().all(|x| x["status"] == "pass"));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 8, "{csv}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn hom_check_reports_failures() {
    let (v, code) = json(&["hom", "check", "--map", "psi-d8", "-n", "6"]);
    assert_eq!(code, 0, "the failure is the expected outcome");
    let report = &v["results"]["report"];
    assert_eq!(report["passed"], false);
    let failures = report["failures"].as_array().unwrap();
    assert!(failures.iter().any(|f| {
        let r = f["relator"].as_str().unwrap();
        r.contains("g6") && r.contains("g3")
    }));
    let (v, code) = json(&["hom", "check", "--map", "phi-inf", "-n", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["report"]["passed"], true);
}

#[test]
fn hom_count_into_small_group() {
    // Homomorphisms from Z2^2 (class-1 quotient of J_3) into Z2: 4.
    let (v, code) = json(&["hom", "count", "--pres", "trunc", "-n", "3", "--class", "1", "--target", "cyclic:2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["count"], 4, "{v}");
}

#[test]
fn order_and_csv_table() {
    let dir = std::env::temp_dir().join(format!("cactus-order-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let (v, code) = json(&["order", "--pres", "thmd", "-n", "4", "--csv", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_manifest(&v);
    assert_eq!(v["results"]["order"], 32);
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap().split(',').next(), Some("coset"));
    assert_eq!(lines.count(), 32);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn coset_cap_exits_two() {
    let (v, code) = json(&["--max-cosets", "10", "order", "--pres", "thmd", "-n", "6"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdicts"][0]["status"], "skipped");
    let out = Command::new(env!("CARGO_BIN_EXE_cactus"))
        .args(["order", "--pres", "thmd", "-n", "6"])
        .env("CACTUS_MAX_COSETS", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn strategies_agree() {
    for strategy in ["hlt", "felsch"] {
        let (v, code) = json(&["--strategy", strategy, "order", "--pres", "trunc", "-n", "4", "--class", "3"]);
        assert_eq!(code, 0);
        assert_eq!(v["results"]["order"], 256, "{strategy}");
    }
}

#[test]
fn lcs_report() {
    let (v, code) = json(&["lcs", "--pres", "trunc", "-n", "4", "--class", "3"]);
    assert_eq!(code, 0);
    let ranks: Vec<u64> = v["results"]["ranks"].as_array().unwrap().iter().map(|r| r.as_u64().unwrap()).collect();
    assert_eq!(ranks, [3, 2, 3]);
    assert_eq!(v["results"]["nilpotent"], true);
}

#[test]
fn iso_finds_witness() {
    let out = cactus(&["iso", "--left", "thmd:4", "--right", "wreath"]);
    assert_eq!(out.status.code(), Some(0));
    let (v, code) = json(&["iso", "--left", "thmd:4", "--right", "dihedral:16"]);
    assert_eq!(code, 0, "a negative answer is still a verdict");
    assert_manifest(&v);
}

#[test]
fn abelianize_reports_invariants() {
    let (v, code) = json(&["abelianize", "--pres", "standard", "-n", "5"]);
    assert_eq!(code, 0);
    assert_manifest(&v);
    assert!(v["verdicts"].as_array().unwrap().iter().all(|x| x["status"] == "pass"));
}

#[test]
fn table_small_row() {
    let (v, code) = json(&["table", "--n", "4,5", "--max-class", "2"]);
    assert_eq!(code, 0);
    assert_manifest(&v);
}

#[test]
fn bad_arguments_are_usage_errors() {
    let out = cactus(&["order", "--pres", "nonsense", "-n", "4"]);
    assert!(!out.status.success());
    let out = cactus(&["hom", "check", "--map", "dihedral", "-n", "4"]);
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
}
