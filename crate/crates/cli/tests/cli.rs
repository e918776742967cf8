use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_freefield"))
        .args(args)
        .env_remove("FREEFIELD_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    let mut pipe = child.stdin.take().expect("stdin");
    if let Some(text) = stdin {
        pipe.write_all(text.as_bytes()).expect("write stdin");
    }
    drop(pipe);
    child.wait_with_output().expect("wait")
}

fn json(args: &[&str], stdin: Option<&str>) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full, stdin);
    let value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    (out.status.code().unwrap(), value)
}

fn text(args: &[&str]) -> (i32, String) {
    let out = run(args, None);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn scratch(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(format!("freefield-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn parse_reports_letters() {
    let (code, v) = json(&["parse", "x*y + inv(z)"], None);
    assert_eq!(code, 0);
    assert_eq!(v["expr"], "x*y + inv(z)");
    assert_eq!(v["letters"], serde_json::json!(["x", "y", "z"]));
    assert_eq!(text(&["parse", "x *  y"]), (0, "x*y\n".into()));
}

#[test]
fn compile_minimize_and_show() {
    let (code, v) = json(&["compile", "x*y+y*x"], None);
    assert_eq!((code, v["dim"].as_u64()), (0, Some(8)));
    let (code, m) = json(&["minimize", "--als", "-"], Some(&v.to_string()));
    assert_eq!((code, m["dim"].as_u64()), (0, Some(4)));
    assert_eq!(m["cert"]["minimal"], "yes");
    let (code, shown) = text(&["show", "--als", "-"]);
    assert_eq!(code, 65, "{shown}");
    let out = run(&["show", "--als", "-"], Some(&m.to_string()));
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("dim: 4"));
}

#[test]
fn rank_exit_codes() {
    assert_eq!(text(&["rank", "x*y*z"]), (0, "4\n".into()));
    let (code, v) = json(&["rank", "x*y+y*x"], None);
    assert_eq!((code, v["rank"].as_u64(), v["certified"].as_bool()), (0, Some(4), Some(true)));
    assert_eq!(text(&["rank", "inv(x) + y"]).0, 2);
}

#[test]
fn invert_reports_the_method() {
    let (code, v) = json(&["invert", "--minimal", "x*y+y*x"], None);
    assert_eq!((code, v["method"].as_str(), v["als"]["dim"].as_u64()), (0, Some("T11"), Some(3)));
    let (code, v) = json(&["invert", "x*y+y*x"], None);
    assert_eq!((code, v["method"].as_str()), (0, Some("standard")));
    assert_eq!(text(&["invert", "--minimal", "x - x"]).0, 65);
}

#[test]
fn eq_verdicts_and_exit_codes() {
    let (code, v) = json(&["eq", "x*y + y*x", "y*x + x*y"], None);
    assert_eq!((code, v["verdict"].as_str(), v["method"].as_str()), (0, Some("equal"), Some("theorem")));
    assert_eq!(v["certificate"]["type"], "transformation");
    let (code, v) = json(&["eq", "x*y", "y*x"], None);
    assert_eq!((code, v["verdict"].as_str()), (1, Some("not_equal")));
    let (code, v) = json(&["eq", "inv(x) + y", "inv(y) + x"], None);
    assert_eq!(
        (code, v["verdict"].as_str(), v["certificate"]["type"].as_str()),
        (1, Some("not_equal"), Some("witness"))
    );
    assert_eq!(text(&["eq", "x - inv(inv(x) + inv(inv(y) - x))", "x*y*x"]), (0, "equal (theorem)\n".into()));
}

#[test]
fn eq_on_files_can_be_inconclusive() {
    // zero written with a nonzero right-hand side: no (T, U) against the
    // empty system, and no evaluation can tell them apart
    let zero = r#"{"alphabet":["x"],"dim":0,"u":[],"v":[],"A":{"1":[]}}"#;
    let f = r#"{"alphabet":["x"],"dim":2,"u":["1","0"],"v":["0","1"],
        "A":{"1":[["0","0"],["0","0"]],"x":[["1","0"],["0","1"]]}}"#;
    let (a, b) = (scratch("f.json", f), scratch("zero.json", zero));
    let (code, v) = json(&["eq", "--als", &a, "--als", &b, "--trials", "10"], None);
    assert_eq!((code, v["verdict"].as_str()), (2, Some("inconclusive")), "{v}");
    let _ = std::fs::remove_file(a);
    let _ = std::fs::remove_file(b);
}

#[test]
fn coefficients_and_hankel() {
    assert_eq!(text(&["coeff", "x*y + 2*y*x", "--word", "yx"]), (0, "yx\t2\n".into()));
    let (code, v) = json(&["coeff", "x*y+y*x", "--maxlen", "2"], None);
    assert_eq!(code, 0);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0], serde_json::json!({"word": "1", "coeff": "0"}));
    let (code, v) = json(&["hankel", "x*y", "--maxlen", "1"], None);
    assert_eq!((code, v["rank"].as_u64()), (0, Some(1)));
    assert_eq!(v["row_words"], serde_json::json!(["1", "x", "y"]));
    assert_eq!(text(&["coeff", "inv(x)", "--word", "x"]).0, 65);
}

#[test]
fn evaluation() {
    let point = scratch("point.json", r#"{"x":[[2]],"y":[[1]]}"#);
    let (code, v) = json(&["eval", "inv(x) + y", "--matrices", &point], None);
    assert_eq!((code, v["value"].clone()), (0, serde_json::json!([["3/2"]])));
    let singular = scratch("singular.json", r#"{"x":[[0]],"y":[[1]]}"#);
    assert_eq!(text(&["eval", "inv(x)", "--matrices", &singular]).0, 65);
    let _ = std::fs::remove_file(point);
    let _ = std::fs::remove_file(singular);
}

#[test]
fn usage_and_data_errors() {
    assert_eq!(text(&["bogus"]).0, 64);
    assert_eq!(text(&["rank"]).0, 64);
    assert_eq!(text(&["--help"]).0, 0);
    assert_eq!(text(&["parse", "x +"]).0, 65);
    let out = run(&["show", "--als", "-"], Some("{"));
    assert_eq!(out.status.code(), Some(65));
    let bad_u = r#"{"alphabet":["x"],"dim":1,"u":["0"],"v":["1"],"A":{"1":[["1"]]}}"#;
    assert_eq!(run(&["show", "--als", "-"], Some(bad_u)).status.code(), Some(65));
}
