use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use toric_cli::{prepare, presentation_from_json, run, ArrangementSpec, Format};
use toric_core::quotient_dimensions;

const B: &str = r#"{"d": 2, "characters": [[3, 1], [0, 1], [1, 0]]}"#;
const B_PRIME: &str = r#"{"d": 2, "characters": [[1, 1], [0, 1], [1, 0]]}"#;
const C: &str = r#"{"d": 3, "characters": [[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, -1, 3]]}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }
}

fn toric_os(args: &[&str], spec: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-os"))
        .args(args)
        .arg(spec)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn poincare_text() {
    let ws = Workspace::new();
    let out = toric_os(&["poincare"], &ws.file("b.json", B));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "[1, 5, 8]\n");
}

#[test]
fn poincare_json_is_tagged() {
    let ws = Workspace::new();
    let out = toric_os(&["poincare", "--json"], &ws.file("b.json", B_PRIME));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema"], "toric-os/1");
    assert_eq!(v["coefficients"], serde_json::json!([1, 5, 6]));
}

#[test]
fn verify_exit_status() {
    let ws = Workspace::new();
    for (name, spec) in [("b.json", B), ("bp.json", B_PRIME), ("c.json", C)] {
        let out = toric_os(&["verify"], &ws.file(name, spec));
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert!(stdout(&out).ends_with("PASS\n"));
    }
    let out = toric_os(&["verify", "--json"], &ws.file("b.json", B));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["quotient"], serde_json::json!([1, 5, 8]));
}

#[test]
fn invalid_inputs_exit_two() {
    let ws = Workspace::new();
    let cases = [
        (r#"{"d": 2, "characters": [[0, 0], [0, 1]]}"#, "zero character"),
        (r#"{"d": 2, "characters": [[2, 4]]}"#, "not primitive"),
        (r#"{"d": 2, "characters": [[1, 0]], "central": false}"#, "non-central"),
        (r#"{"d": 2, "characters": [[1, 0, 0]]}"#, "coordinates"),
        (r#"{"d": 2, "characters": [[1, 0]], "colour": 1}"#, "malformed"),
        (r#"{"d": 2, "characters": [[1, 0], [0, 1]], "order": [0, 0]}"#, "permutation"),
        ("not json", "malformed"),
    ];
    for (k, (spec, message)) in cases.iter().enumerate() {
        let out = toric_os(&["poincare"], &ws.file(&format!("{k}.json"), spec));
        assert_eq!(out.status.code(), Some(2), "{spec}");
        assert!(stderr(&out).contains(message), "{spec}: {}", stderr(&out));
    }
    let out = toric_os(&["poincare"], &ws.dir.path().join("missing.json"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn normalize_divides_by_content() {
    let ws = Workspace::new();
    let spec = ws.file("b2.json", r#"{"d": 2, "characters": [[6, 2], [0, 1], [1, 0]]}"#);
    assert_eq!(toric_os(&["poincare"], &spec).status.code(), Some(2));
    let out = toric_os(&["poincare", "--normalize"], &spec);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "[1, 5, 8]\n");
}

#[test]
fn order_flag_permutes_ground_set() {
    let ws = Workspace::new();
    let spec = ws.file("b.json", B);
    let out = toric_os(&["matroid", "--json", "--order", "2,0,1"], &spec);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["circuits"][0]["dependency"], serde_json::json!([3, -1, 1]));
    assert_eq!(v["names"], serde_json::json!(["2", "0", "1"]));
    assert_eq!(stdout(&toric_os(&["poincare", "--order", "2,0,1"], &spec)), "[1, 5, 8]\n");
    assert_eq!(toric_os(&["verify", "--order", "1,2,0"], &spec).status.code(), Some(0));
    assert_eq!(toric_os(&["poincare", "--order", "0,1"], &spec).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let ws = Workspace::new();
    let spec = ws.file("c.json", C);
    for cmd in ["matroid", "layers", "presentation", "verify"] {
        let first = toric_os(&[cmd, "--json"], &spec);
        let second = toric_os(&[cmd, "--json"], &spec);
        assert_eq!(first.stdout, second.stdout, "{cmd}");
    }
}

#[test]
fn output_file() {
    let ws = Workspace::new();
    let target = ws.dir.path().join("out.txt");
    let out = toric_os(&["poincare", "-o", target.to_str().unwrap()], &ws.file("b.json", B));
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(target).unwrap(), "[1, 5, 8]\n");
}

#[test]
fn presentation_round_trip() {
    let ws = Workspace::new();
    for (name, spec, want) in [
        ("b.json", B, vec![1, 5, 8]),
        ("bp.json", B_PRIME, vec![1, 5, 6]),
        ("c.json", C, vec![1, 7, 16, 16]),
        ("line.json", r#"{"d": 2, "characters": [[1, 2], [1, 2]]}"#, vec![1, 3, 2]),
    ] {
        let out = toric_os(&["presentation", "--json"], &ws.file(name, spec));
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        let parsed = presentation_from_json(&v).unwrap();
        assert_eq!(quotient_dimensions(&parsed).0, want, "{name}");

        let verified = toric_os(&["verify", "--json"], &ws.file(name, spec));
        let report: Value = serde_json::from_str(&stdout(&verified)).unwrap();
        assert_eq!(report["quotient"], serde_json::json!(want));
    }
}

#[test]
fn presentation_text_uses_layer_names() {
    let spec = ArrangementSpec::parse(
        r#"{"d": 2, "characters": [[3, 1], [0, 1], [1, 0]],
            "layer_names": {"L2_0": "p", "L2_1": "q", "L2_2": "r"}}"#,
    )
    .unwrap();
    let prepared = prepare(&spec, false, None).unwrap();
    let text = run(toric_cli::Command::Presentation, &prepared, Format::Text).body;
    assert!(text.contains("degree 2 (14)"));
    assert!(text.contains("e[T;{};{0}] - e[T;{};{1}] - 3 e[T;{};{2}] = 0"));
    assert!(text.contains(
        "X = {0,1,2} at p: -1/3 e[T;{};{0,1}] + e[p;{0,1};{}] - e[T;{};{0,2}] - e[p;{0,2};{}] + e[T;{};{1,2}] + e[p;{1,2};{}] = 0"
    ));
    let json = run(toric_cli::Command::Presentation, &prepared, Format::Json).body;
    let v: Value = serde_json::from_str(&json).unwrap();
    let parsed = presentation_from_json(&v).unwrap();
    assert_eq!(quotient_dimensions(&parsed).0, vec![1, 5, 8]);
}

#[test]
fn layers_json() {
    let ws = Workspace::new();
    let out = toric_os(&["layers", "--json"], &ws.file("b.json", B));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let layers = v["layers"].as_array().unwrap();
    assert_eq!(layers.len(), 7);
    assert_eq!(layers[5]["translation"], serde_json::json!(["1/3", "0"]));
    assert_eq!(v["covers"].as_array().unwrap().len(), 3 + 7);
}

#[test]
fn rejects_bad_presentation_documents() {
    for doc in [
        r#"{"schema": "other"}"#,
        r#"{"schema": "toric-os/1", "layers": []}"#,
        r#"{"schema": "toric-os/1", "dim": 1, "deficit": 0, "layers": [], "generators": [{"layer": "T", "a": [], "b": []}], "products": [], "toro_relations": [], "circuit_relations": []}"#,
    ] {
        let v: Value = serde_json::from_str(doc).unwrap();
        assert!(presentation_from_json(&v).is_err(), "{doc}");
    }
}
