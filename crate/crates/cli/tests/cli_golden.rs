use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).display().to_string()
}

fn interline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_interline"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(root().join("tests/golden").join(name)).unwrap()
}

fn assert_golden(args: &[&str], name: &str) {
    let out = interline(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), golden(name), "output differs from {name}");
}

#[test]
fn weighted_allocation_golden() {
    assert_golden(
        &["allocate", "--problem", &fixture("six_airport_network.json"), "--rule", "weighted"],
        "allocate_weighted.json",
    );
}

#[test]
fn equal_allocation_golden() {
    assert_golden(
        &["allocate", "--problem", &fixture("six_airport_network.json"), "--rule", "equal"],
        "allocate_equal.json",
    );
}

#[test]
fn all_rules_table_golden() {
    assert_golden(
        &["allocate", "--problem", &fixture("six_airport_network.json"), "--rule", "all", "--format", "table"],
        "allocate_all.txt",
    );
}

#[test]
fn printed_tables_settlement_golden() {
    assert_golden(
        &[
            "spf",
            "--segments",
            &fixture("madrid_nairobi_segments.json"),
            "--factors",
            &fixture("regions.json"),
            "--atbp",
            "900",
            "--paper-table-mode",
        ],
        "spf_printed_tables.json",
    );
}

#[test]
fn game_golden() {
    assert_golden(&["game", "--problem", &fixture("six_airport_network.json")], "game.json");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["audit", "--rule", "r1", "--axiom", "additivity", "--trials", "40", "--seed", "3"];
    assert_eq!(interline(&args).stdout, interline(&args).stdout);
}

#[test]
fn numbers_have_six_decimals() {
    let out = stdout(&interline(&["allocate", "--problem", &fixture("six_airport_network.json"), "--rule", "r5"]));
    assert!(out.contains("\"5\": 29.454545"), "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["total"].as_f64(), Some(81.0));
}

#[test]
fn passenger_weights_feed_r4() {
    let out = interline(&[
        "allocate",
        "--problem",
        &fixture("six_airport_network.json"),
        "--rule",
        "r4",
        "--weights",
        &fixture("passenger_weights.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r4: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let w: Value = serde_json::from_str(&golden("allocate_weighted.json")).unwrap();
    // Doubling one passenger's weights does not change its split.
    assert_eq!(r4["allocation"], w["allocation"]);
}

#[test]
fn r4_without_passenger_weights_is_a_configuration_error() {
    let out = interline(&["allocate", "--problem", &fixture("six_airport_network.json"), "--rule", "r4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no weight system for passenger"));

    let all = interline(&["allocate", "--problem", &fixture("six_airport_network.json"), "--rule", "all"]);
    let v: Value = serde_json::from_str(&stdout(&all)).unwrap();
    assert_eq!(v["skipped"][0], "r4");
}

#[test]
fn malformed_json_reports_position() {
    let dir = std::env::temp_dir().join(format!("interline-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"airports\": [\"a\",\n  \"b\" \"c\"]}").unwrap();
    let out = interline(&["validate", "--problem", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2 column"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn validation_failures_exit_one_with_report() {
    let text = std::fs::read_to_string(fixture("six_airport_network.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["passengers"][0]["itinerary"].as_array_mut().unwrap().swap(0, 1);
    let dir = std::env::temp_dir().join(format!("interline-cli-v-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("reordered.json");
    std::fs::write(&path, v.to_string()).unwrap();

    let out = interline(&["validate", "--problem", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["ok"], false);
    assert!(report["violations"]
        .as_array()
        .unwrap()
        .iter()
        .any(|x| x["kind"] == "itinerary_not_path"));

    let refused = interline(&["allocate", "--problem", path.to_str().unwrap(), "--rule", "equal"]);
    assert_eq!(refused.status.code(), Some(1));
    assert!(refused.stdout.is_empty());
}

#[test]
fn valid_problem_validates() {
    let out = interline(&["validate", "--problem", &fixture("six_airport_network.json"), "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "ok\n");
}

#[test]
fn audit_exit_codes() {
    let clean = interline(&["audit", "--rule", "weighted", "--axiom", "null_airline", "--trials", "100"]);
    assert_eq!(clean.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&clean)).unwrap();
    assert_eq!(report["failures"], 0);
    assert_eq!(report["witness"], Value::Null);

    let expected_failure = interline(&["audit", "--rule", "r3", "--axiom", "ind_other_airlines", "--trials", "100"]);
    assert_eq!(expected_failure.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&expected_failure)).unwrap();
    assert!(report["failures"].as_u64().unwrap() > 0);
    assert_eq!(report["witness"]["transformation"]["kind"], "reassignment");

    let defect = interline(&["audit", "--rule", "r2", "--axiom", "ind_other_airlines", "--trials", "100"]);
    assert_eq!(defect.status.code(), Some(2));
}

#[test]
fn audit_table_shows_yes_no_cells() {
    let out = interline(&["audit", "--rule", "equal", "--trials", "60", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("Pairwise hom."));
    assert!(text.lines().any(|l| l.starts_with("Pairwise hom.") && l.contains("No ")));
    assert!(text.lines().any(|l| l.starts_with("Additivity") && l.contains("Yes 0/60")));
}

#[test]
fn unknown_rule_is_rejected() {
    let out = interline(&["allocate", "--problem", &fixture("six_airport_network.json"), "--rule", "r9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown rule"));
}
