use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE_TWO: &str = r#"{"base":"smooth","steps":[{"kind":"free","on":null},{"kind":"free","on":0},{"kind":"satellite","on":[0,1]}]}"#;
const SINGLE: &str = r#"{"base":"smooth","steps":[{"kind":"free","on":null}]}"#;

fn surfval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surfval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn json_ok(args: &[&str]) -> Value {
    let out = surfval(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_example_two() {
    let dir = TempDir::new().unwrap();
    let c = write(dir.path(), "c.json", EXAMPLE_TWO);
    let v = json_ok(&[
        "analyze",
        c.to_str().unwrap(),
        "--divisor",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(v["lct"], "5");
    assert_eq!(v["fingen_degree"], 6);
    assert_eq!(v["verdict"], "ComputesLct");
    assert_eq!(v["generator_ideal"], serde_json::json!(["2", "3", "6"]));
    assert!(v.get("approx").is_none());

    let last = json_ok(&["analyze", c.to_str().unwrap(), "--last"]);
    assert_eq!(last, v);
}

#[test]
fn mld_single_blowup() {
    let dir = TempDir::new().unwrap();
    let c = write(dir.path(), "c.json", SINGLE);
    let v = json_ok(&[
        "mld",
        c.to_str().unwrap(),
        "--ideal",
        "1",
        "--lambda",
        "2/1",
        "--divisor",
        "0",
    ]);
    assert_eq!(v["mld"], "0");
    assert_eq!(v["computes_mld"], true);

    let pair = write(dir.path(), "p.json", r#"{"ideal":["1"],"lambda":"3"}"#);
    let v = json_ok(&["mld", c.to_str().unwrap(), "--pair", pair.to_str().unwrap()]);
    assert_eq!(v["mld"], "-inf");
}

#[test]
fn json_output_is_stable_and_sorted() {
    let dir = TempDir::new().unwrap();
    let c = write(dir.path(), "c.json", EXAMPLE_TWO);
    let a = surfval(&["classify", c.to_str().unwrap()]).stdout;
    let b = surfval(&["classify", c.to_str().unwrap()]).stdout;
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("      \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .take(8)
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn approximations_only_on_request() {
    let dir = TempDir::new().unwrap();
    let c = write(dir.path(), "c.json", EXAMPLE_TWO);
    let out =
        String::from_utf8(surfval(&["lct", c.to_str().unwrap(), "--divisor", "1"]).stdout).unwrap();
    assert!(!out.contains('.'), "{out}");
    let v = json_ok(&["lct", c.to_str().unwrap(), "--divisor", "0", "--approx"]);
    assert_eq!(v["lct"], "2");
    assert_eq!(v["approx"]["lct"], 2.0);
}

#[test]
fn ideal_fingen_and_lct_of_ideal() {
    let dir = TempDir::new().unwrap();
    let c = write(dir.path(), "c.json", EXAMPLE_TWO);
    let p = c.to_str().unwrap();
    let v = json_ok(&["ideal", p, "--divisor", "2", "--m", "12"]);
    assert_eq!(v["ideal"], serde_json::json!(["4", "6", "12"]));
    let v = json_ok(&["fingen", p, "--last"]);
    assert_eq!(v["fingen_degree"], 6);
    assert_eq!(v["dstar"], serde_json::json!(["1/3", "1/2", "1"]));
    let v = json_ok(&["lct", p, "--ideal", "2,3,6"]);
    assert_eq!(v["lct"], "5/6");
    assert_eq!(v["argmin"], serde_json::json!([2]));
}

#[test]
fn dot_output() {
    let dir = TempDir::new().unwrap();
    let c = write(dir.path(), "c.json", EXAMPLE_TWO);
    let out = surfval(&["dot", c.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph cluster {"));
    assert!(text.contains("E0 -- E2;"));
    assert!(text.contains("E1 -- E2;"));
    assert!(!text.contains("E0 -- E1;"));
}

#[test]
fn validation_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"base":"smooth","steps":[{"kind":"free","on":null},{"kind":"free","on":5}]}"#,
    );
    let out = surfval(&["analyze", bad.to_str().unwrap(), "--divisor", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("InvalidStep at steps[1]"), "{err}");

    let c = write(dir.path(), "c.json", EXAMPLE_TWO);
    let out = surfval(&["lct", c.to_str().unwrap(), "--ideal", "1,1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("NotAntinef"));

    let out = surfval(&[
        "mld",
        c.to_str().unwrap(),
        "--ideal",
        "2,3,6",
        "--lambda",
        "x",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("ParseRational"));

    let out = surfval(&["analyze", c.to_str().unwrap(), "--divisor", "7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("UnknownCurve"));

    let out = surfval(&["analyze", "/nonexistent/c.json", "--divisor", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(surfval(&[]).status.code(), Some(2));
    assert_eq!(surfval(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(surfval(&["analyze"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let c = write(dir.path(), "c.json", EXAMPLE_TWO);
    let out = surfval(&["analyze", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = surfval(&["analyze", c.to_str().unwrap(), "--divisor", "1", "--last"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn paper_examples_table() {
    let out = surfval(&["paper-examples"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS  example 1 (single blowup)"));
    for r in 3..=8 {
        assert!(text.contains(&format!("PASS  example 2 (r={r})")), "{text}");
    }
    assert!(!text.contains("FAIL"));
    assert_eq!(text.matches("note: closed form").count(), 5);

    let v = json_ok(&["paper-examples", "--format", "json"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 8);
}

#[test]
fn enumerate_csv_and_jobs() {
    let dir = TempDir::new().unwrap();
    let csv1 = dir.path().join("a.csv");
    let csv2 = dir.path().join("b.csv");
    let v1 = json_ok(&[
        "enumerate",
        "--max-steps",
        "4",
        "--csv",
        csv1.to_str().unwrap(),
        "--jobs",
        "1",
    ]);
    let v2 = json_ok(&[
        "enumerate",
        "--max-steps",
        "4",
        "--csv",
        csv2.to_str().unwrap(),
        "--jobs",
        "4",
    ]);
    assert_eq!(v1["clusters"], 15);
    assert_eq!(v1["clusters"], v2["clusters"]);
    let a = std::fs::read_to_string(&csv1).unwrap();
    assert_eq!(a, std::fs::read_to_string(&csv2).unwrap());
    assert!(a.starts_with("base,steps,curve,k,lct,gap,fingen_degree,verdict,witness\n"));
    assert_eq!(
        a.lines().count() as u64,
        1 + v1["atlas_rows"].as_u64().unwrap()
    );
}

#[test]
fn enumerate_verify_and_extremal() {
    let v = json_ok(&[
        "enumerate",
        "--max-steps",
        "4",
        "--ideal-bound",
        "1",
        "--verify",
        "--extremal",
        "1",
    ]);
    assert_eq!(v["clean"], true);
    assert_eq!(v["verification"]["counterexamples"], serde_json::json!([]));
    let top = &v["extremal"][0];
    assert_eq!(top["gap"], "1/6");
    assert_eq!(top["verdict"], "MldObstructed");

    let v = json_ok(&["enumerate", "--max-steps", "1", "--bases", "A1,E6"]);
    assert_eq!(v["clusters"], 2 + 6 + 5 + 1);

    let out = surfval(&["enumerate", "--bases", "Q7"]);
    assert_eq!(out.status.code(), Some(1));
}
