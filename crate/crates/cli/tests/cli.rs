//! End-to-end runs of the `octic` binary.

use std::process::{Command, Output};

fn octic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_octic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_reports_the_invariants() {
    let out = octic(&["analyze", "--catalog", "2", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["admissible"], true);
    assert_eq!(v["counters"]["p3"], "4");
    assert_eq!(v["invariants"]["e"], "140");
    assert_eq!(v["invariants"]["h11"], "70");
    assert_eq!(v["invariants"]["h12"], "0");
}

#[test]
fn count_emits_records_with_consistent_totals() {
    let out = octic(&[
        "count", "--catalog", "85", "--primes", "5,7", "--threads", "3", "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["p"], "5");
    assert_eq!(records[0]["ap"], "-2");
    let get = |r: &serde_json::Value, k: &str| -> i64 { r[k].as_str().unwrap().parse().unwrap() };
    for r in records {
        assert_eq!(
            get(r, "total"),
            get(r, "raw") + get(r, "line_corr") + get(r, "fourfold_corr")
        );
    }
}

#[test]
fn modular_matches_the_expected_newform() {
    let out = octic(&["modular", "--catalog", "84", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["matched"], "6k4A");
    assert_eq!(v["ap"]["17"], "-126");
    assert!(v["agreement"].as_object().unwrap().values().all(|b| b == true));
}

#[test]
fn json_output_is_byte_stable_across_runs_and_threads() {
    let a = octic(&["count", "--catalog", "2", "--primes", "5,7,11", "--threads", "1", "--json"]);
    let b = octic(&["count", "--catalog", "2", "--primes", "5,7,11", "--threads", "4", "--json"]);
    assert_eq!(stdout(&a), stdout(&b));
    let c = octic(&["analyze", "--catalog", "f42", "--json"]);
    let d = octic(&["analyze", "--catalog", "f42", "--json"]);
    assert_eq!(stdout(&c), stdout(&d));
}

#[test]
fn exported_documents_round_trip_through_files() {
    let out = octic(&["catalog", "export", "f22"]);
    assert!(out.status.success());
    let dir = std::env::temp_dir().join("octic-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f22.json");
    std::fs::write(&path, stdout(&out)).unwrap();
    let analyzed = octic(&["analyze", "--file", path.to_str().unwrap(), "--json"]);
    assert!(analyzed.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&analyzed)).unwrap();
    assert_eq!(v["counters"]["p3"], "13");
}

#[test]
fn catalog_params_flag_overrides_defaults() {
    let out = octic(&["analyze", "--catalog", "f1", "--params", "A=2,B=5", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["invariants"]["h12"], "1");
}

#[test]
fn twisted_count_matches_the_remark() {
    let out = octic(&[
        "count", "--catalog", "61", "--scale", "-2", "--primes", "5,7", "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["records"][0]["ap"], "-2");
    assert_eq!(v["records"][1]["ap"], "24");
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(octic(&["analyze"]).status.code(), Some(1));
    assert_eq!(octic(&["count", "--catalog", "2"]).status.code(), Some(1));
    assert_eq!(
        octic(&["analyze", "--catalog", "no-such-key"]).status.code(),
        Some(1)
    );
    // bad prime listed explicitly
    assert_eq!(
        octic(&["count", "--catalog", "84", "--primes", "3"]).status.code(),
        Some(1)
    );
    // admissibility failure
    let dir = std::env::temp_dir().join("octic-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pencil.json");
    std::fs::write(
        &path,
        r#"{"name":"pencil","planes":[
            ["1","0","0","0"],["0","1","0","0"],["1","1","0","0"],["1","-1","0","0"],
            ["0","0","1","0"],["0","0","0","1"],["1","1","1","1"],["1","2","3","4"]]}"#,
    )
    .unwrap();
    let out = octic(&["analyze", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // table1 succeeds on the shipped catalog
    assert_eq!(octic(&["table1"]).status.code(), Some(0));
}

#[test]
fn table1_reports_every_row() {
    let out = octic(&["table1", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["all_match"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 22);
}
