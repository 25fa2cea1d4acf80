use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str], input: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plankcover")).args(args).arg(input).output().unwrap()
}

#[test]
fn simplex_demo_writes_report_and_figure() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("demo.svg");
    let out = run(&["simplex-demo", "--svg", svg.to_str().unwrap()], &data("simplex_demo.json"));
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["witness"]["in_B_margin"].as_f64().unwrap() >= -1e-9);
    let fig = std::fs::read_to_string(svg).unwrap();
    assert!(fig.starts_with("<?xml") && fig.contains("viewBox=\"0 0 1000 1000\""));
}

#[test]
fn tight_simplex_is_refused_with_reason() {
    let out = run(&["simplex-demo"], &data("simplex_tight.json"));
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "refused");
    assert!(report["reason"].as_str().unwrap().starts_with("bound permits coverings"));
}

#[test]
fn covering_by_the_body_itself_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tight.json");
    let sq = r#"{"dim": 2, "halfspaces": [{"a": [1, 0], "b": 1}, {"a": [-1, 0], "b": 0}, {"a": [0, 1], "b": 1}, {"a": [0, -1], "b": 0}]}"#;
    std::fs::write(&input, format!(r#"{{"B": {sq}, "pieces": [{{"C": {sq}, "shift": [0, 0]}}]}}"#)).unwrap();
    assert_eq!(run(&["witness"], &input).status.code(), Some(2));
}

#[test]
fn malformed_input_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    std::fs::write(&input, "{\"d\": 2,\n \"lambdas\": [0.5,, 0.5]}").unwrap();
    let out = run(&["simplex-demo"], &input);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn dimension_mismatch_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("mismatch.json");
    std::fs::write(&input, r#"{"units": [[1, 0], [0, 1, 0]], "widths": [1, 1], "offsets": [0, 0]}"#).unwrap();
    let out = run(&["select-bang"], &input);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn missing_file_and_bad_tolerance() {
    assert_eq!(run(&["inradius"], Path::new("/nonexistent.json")).status.code(), Some(3));
    assert_eq!(run(&["--tol", "0", "inradius"], &data("inradius.json")).status.code(), Some(3));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("r.json");
    let out = run(&["inradius", "--out", out_path.to_str().unwrap()], &data("inradius.json"));
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(report["relative_width"], 0.3);
}
