use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rz-strata")).args(args).output().expect("run binary")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf-8")
}

fn validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/rz-strata.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).expect("schema file")).expect("schema json");
    jsonschema::validator_for(&schema).expect("valid schema")
}

fn assert_valid(v: &jsonschema::Validator, args: &[&str]) -> Value {
    let doc: Value = serde_json::from_str(&stdout(args)).expect("json output");
    let errors: Vec<String> = v.iter_errors(&doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?} violates the schema: {errors:?}");
    doc
}

#[test]
fn json_outputs_follow_the_schema() {
    let v = validator();
    assert_valid(&v, &["tables", "--case", "inert", "--format", "json"]);
    assert_valid(&v, &["dl", "--m", "1", "--side", "plus", "--format", "json"]);
    assert_valid(&v, &["tree", "--radius", "1", "--format", "json"]);
    assert_valid(&v, &["lattices", "--m", "1", "--points", "--format", "json"]);
    assert_valid(&v, &["verify", "--suite", "tables", "--suite", "dl", "--m", "1", "--format", "json"]);
    let broken = serde_json::json!([{"id": "x", "params": {"case": "inert"}, "status": "fail",
        "counts": {}, "notes": [], "witnesses": []}]);
    assert!(!v.is_valid(&broken), "a failed report without a witness passed the schema");
}

#[test]
fn minus_side_over_f9_is_all_unit() {
    let out = stdout(&["dl", "--p", "3", "--m", "1", "--side", "minus", "--format", "json"]);
    assert_eq!(out.trim(), r#"{"unit":280,"w1":0,"w2":0}"#);
}

#[test]
fn radius_one_tree_has_eleven_nodes() {
    let dot = stdout(&["tree", "--p", "3", "--radius", "1"]);
    assert!(dot.starts_with("graph split_tree {\n") && dot.ends_with("}\n"));
    let nodes: Vec<&str> = dot.lines().filter(|l| l.contains("[label=") && !l.contains(" -- ")).collect();
    let edges: Vec<&str> = dot.lines().filter(|l| l.contains(" -- ")).collect();
    assert_eq!(nodes.len(), 11);
    assert_eq!(edges.len(), 10);
    // every edge runs between declared node ids
    let ids: Vec<&str> = nodes.iter().map(|l| l.split_whitespace().next().unwrap()).collect();
    for e in &edges {
        let mut words = e.split_whitespace();
        let (a, _, b) = (words.next().unwrap(), words.next(), words.next().unwrap());
        assert!(ids.contains(&a) && ids.contains(&b), "dangling edge {e}");
        assert!(e.contains("label=\"odd⊂even\""), "edge {e}");
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["lattices", "--m", "1", "--format", "csv"];
    assert_eq!(stdout(&args), stdout(&args));
    let threads = Command::new(env!("CARGO_BIN_EXE_rz-strata"))
        .args(args)
        .env("RZ_STRATA_THREADS", "3")
        .output()
        .expect("run binary");
    assert_eq!(String::from_utf8(threads.stdout).unwrap(), stdout(&args));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["tables", "--case", "ramified"]).status.code(), Some(2));
    assert_eq!(run(&["tree", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(run(&["dl", "--p", "4"]).status.code(), Some(2));
    assert_eq!(run(&["dl", "--m", "7"]).status.code(), Some(2));
    assert_eq!(run(&["lattices", "--a", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "tables", "--suite", "weyl"]).status.code(), Some(0));
}

#[test]
fn output_flag_writes_the_file() {
    let dir = std::env::temp_dir().join(format!("rz-strata-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("split.csv");
    let out = run(&["tables", "--case", "split", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().count(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}
