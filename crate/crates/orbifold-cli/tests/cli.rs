use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbifold"))
        .args(args)
        .env_remove("ORBIFOLD_CACHE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn build_reports_order_and_schema() {
    let out = run(&["build", "--family", "1", "-m", "1", "-n", "1", "-r", "3", "-s", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["order"], 6);
    assert_eq!(v["kernel"], true);
    assert_eq!(v["round_trip"], true);

    let v = json(&run(&["build", "--family", "20", "--expected"]));
    assert_eq!(v["order"], 288);
    assert_eq!(v["expected"]["order"]["status"], "match");
}

#[test]
fn invalid_specs_exit_2() {
    let out = run(&["build", "--family", "33", "-m", "1", "-n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("m≠1"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    assert_eq!(run(&["build", "--family", "99"]).status.code(), Some(2));
    assert_eq!(run(&["build", "--family", "1", "-r", "4", "-s", "2"]).status.code(), Some(2));
    assert_eq!(run(&["build", "--family", "5", "--conductor-override", "6"]).status.code(), Some(2));
    assert_eq!(run(&["build", "--family"]).status.code(), Some(2));
}

#[test]
fn conductor_override_gives_the_same_group() {
    let a = json(&run(&["build", "--family", "11", "-m", "1", "-n", "2", "-r", "3", "-s", "1"]));
    let b = json(&run(&["build", "--family", "11", "-m", "1", "-n", "2", "-r", "3", "-s", "1", "--conductor-override", "120"]));
    assert_eq!(b["conductor"], 120);
    assert_eq!(a["order"], b["order"]);
    assert_eq!(a["tuple"], b["tuple"]);
}

#[test]
fn isom_with_expected_values() {
    let out = run(&["isom", "--family", "22", "--expected"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["isom_plus"]["pi0_name"], "D6");
    assert_eq!(v["expected"]["isom_plus"]["status"], "match");
    assert_eq!(v["orientation_reversing"]["witness_verified"], true);
}

#[test]
fn base_and_fibrations() {
    let v = json(&run(&["base", "--family", "2bis", "-n", "3"]));
    assert_eq!(v["base"], "RP2");
    assert_eq!(v["cone"], serde_json::json!([3]));
    assert_eq!(v["signature"], "RP2(3)");

    let out = run(&["base", "--family", "25"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["command"], "fibrations");
    assert_eq!(v["fibrations"], serde_json::json!([]));

    let v = json(&run(&["fibrations", "--family", "13", "-m", "2", "-n", "3"]));
    let kinds: Vec<&str> = v["fibrations"].as_array().unwrap().iter().map(|f| f["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["standard", "standard"]);
}

#[test]
fn singular_locus() {
    let v = json(&run(&["singular", "--family", "1", "-m", "2", "-n", "2", "-r", "1"]));
    assert_eq!(v["free"], false);
    assert_eq!(v["singular_locus"]["edges"].as_array().unwrap().len(), 2);
    let v = json(&run(&["singular", "--family", "1", "-m", "1", "-n", "1", "-r", "5", "-s", "2"]));
    assert_eq!(v["free"], true);
}

#[test]
fn verify_tables_1_and_5_pass() {
    for table in ["1", "5"] {
        let out = run(&["verify", "--tables", table, "--max-param", "3", "--json"]);
        assert_eq!(out.status.code(), Some(0), "table {table}: {}", stderr(&out));
        let v = json(&out);
        assert_eq!(v["summary"]["mismatch"], 0);
        assert!(v["summary"]["match"].as_u64().unwrap() > 100);
    }
}

#[test]
fn verify_table_4_reports_mismatches_with_exit_4() {
    let out = run(&["verify", "--tables", "4", "--max-param", "3", "--jobs", "4", "--json"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("mismatched rows"));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    let groups: Vec<&str> = rows.iter().filter_map(|r| r["checks"]["row"].as_str()).collect();
    for branch in [
        "(D*4m/D*4m,C2n/C2n), C-side index even",
        "(D*4m/D*4m,C2n/C2n), C-side index odd",
        "(D*4m/C2m,C4n/C2n), C-side index odd",
        "(D*4m/C2m,C4n/C2n), C-side index even",
        "(D*4m/D*4m,D*4n/D*4n), n odd",
        "(D*8m/D*4m,D*4n/C2n), n even",
        "(D*8m/D*4m,D*4n/C2n), n odd",
    ] {
        assert!(groups.contains(&branch), "{branch} not exercised");
    }
    for r in rows.iter().filter(|r| r["status"] == "mismatch") {
        for c in r["checks"].as_object().unwrap().values().filter(|c| c["status"] == "mismatch") {
            assert!(c.get("computed").is_some() && c.get("expected").is_some());
        }
    }
}

#[test]
fn output_is_deterministic_and_sorted() {
    let args = ["verify", "--tables", "2,3", "--max-param", "2", "--jobs", "3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(run(&["build", "--family", "20", "--json"]).stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    let keys: Vec<String> = json(&run(&["build", "--family", "20"])).as_object().unwrap().keys().cloned().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(text.find("\"command\"").unwrap() < text.find("\"schema\"").unwrap());
}

fn cache_files(dir: &Path) -> usize {
    std::fs::read_dir(dir).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json")).count()
}

#[test]
fn cached_and_fresh_runs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let fresh = run(&["verify", "--tables", "4", "--max-param", "2", "--json"]);
    let first = run(&["verify", "--tables", "4", "--max-param", "2", "--json", "--cache", cache]);
    let files = cache_files(dir.path());
    assert!(files > 20, "{files}");
    let second = run(&["verify", "--tables", "4", "--max-param", "2", "--json", "--cache", cache]);
    assert_eq!(cache_files(dir.path()), files);
    assert_eq!(fresh.stdout, first.stdout);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(fresh.status.code(), second.status.code());

    let via_env = Command::new(env!("CARGO_BIN_EXE_orbifold"))
        .args(["isom", "--family", "22"])
        .env("ORBIFOLD_CACHE", cache)
        .output()
        .unwrap();
    assert_eq!(via_env.status.code(), Some(0));
    assert!(cache_files(dir.path()) > files);
    assert_eq!(json(&via_env), json(&run(&["isom", "--family", "22"])));
}
