use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const N2: &str = "2\n1 1\n1 1\n";
const E3: &str = "# unit group {0, 1} with a zero\n3\n0 1 2\n1 0 2\n2 2 2\n";
const C3: &str = "3\n0 1 2\n1 2 0\n2 0 1\n";

fn sgzs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgzs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn analyze_json(text: &str) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "s.txt", text);
    let out = sgzs(&["analyze", &file, "--format", "json"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    json(&out)
}

#[test]
fn analyze_nil_pair() {
    let r = analyze_json(N2);
    assert_eq!(r["big_d"], 3);
    assert_eq!(r["small_d"], 2);
    assert_eq!(r["kappa"], 2);
    assert_eq!(r["egz"]["exact"], 4);
    assert_eq!(r["flags"]["nil"], true);
    assert_eq!(r["flags"]["group_free"], true);
}

#[test]
fn analyze_elementary_fixture() {
    let r = analyze_json(E3);
    assert_eq!((r["exp"].as_u64(), r["kappa"].as_u64()), (Some(2), Some(4)));
    assert_eq!(r["big_d"], 2);
    assert_eq!(r["egz"]["exact"], 5);
    assert_eq!(r["flags"]["elementary"], true);
}

#[test]
fn analyze_cyclic_group() {
    let r = analyze_json(C3);
    assert_eq!(r["big_d"], 3);
    assert_eq!(r["egz"]["exact"], 5);
    assert_eq!(r["flags"]["group"], true);
}

#[test]
fn analyze_text_lists_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "n2.txt", N2);
    let out = sgzs(&["analyze", &file]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("E          4"), "{text}");
    assert!(text.contains("C-LNIL     holds"), "{text}");
}

#[test]
fn analyze_rejects_non_associative_table() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "bad.txt", "2\n1 0\n0 0\n");
    let out = sgzs(&["analyze", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("associative"));
}

#[test]
fn missing_file_and_bad_usage_exit_one() {
    assert_eq!(
        sgzs(&["analyze", "/nonexistent/table.txt"]).status.code(),
        Some(1)
    );
    assert_eq!(sgzs(&["verify"]).status.code(), Some(1));
    assert_eq!(sgzs(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn generate_writes_one_file_per_class() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("order2");
    let out = sgzs(&[
        "generate",
        "--order",
        "2",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_dir(&out_dir).unwrap().count(), 3);

    let report = sgzs(&["verify", "--dir", out_dir.to_str().unwrap()]);
    assert_eq!(report.status.code(), Some(0));
    assert_eq!(json(&report)["aggregate"]["analyzed"], 3);
}

#[test]
fn verify_order_two() {
    let out = sgzs(&["verify", "--order", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["entries"].as_array().unwrap().len(), 3);
    assert_eq!(r["aggregate"]["theorem_failures"], 0);
}

#[test]
fn corrupt_file_is_reported_and_sets_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "good.txt", C3);
    write(dir.path(), "corrupt.txt", "2\n0 1\n1\n");
    let out = sgzs(&["verify", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["aggregate"]["analyzed"], 1);
    assert_eq!(r["aggregate"]["input_errors"], 1);
    let entries = r["entries"].as_array().unwrap();
    assert!(entries
        .iter()
        .any(|e| e["source"].as_str().unwrap().ends_with("corrupt.txt") && e["error"].is_string()));
}

#[test]
fn output_does_not_depend_on_job_count() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str| {
        let path = dir.path().join(format!("jobs{jobs}.json"));
        let out = sgzs(&[
            "verify",
            "--order",
            "3",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let mut r: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
        r.as_object_mut().unwrap().remove("wall_time_ms");
        r
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn csv_has_one_row_per_entry() {
    let out = sgzs(&["verify", "--order", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("canonical,source,order,flags,exp,kappa,d,D,E,C-PROP2"));
    assert_eq!(lines.count(), 12);
}
