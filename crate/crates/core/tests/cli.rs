use std::process::{Command, Output};

use pgl2z::parse_element;
use serde_json::Value;

fn pgl2z(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgl2z"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn check_element(v: &Value) {
    let matrix = v["matrix"].as_str().expect("matrix string");
    let lft = v["lft"].as_str().expect("lft string");
    assert_eq!(
        parse_element(matrix).unwrap(),
        parse_element(lft).unwrap(),
        "{v}"
    );
    assert_eq!(v.as_object().unwrap().len(), 2);
}

/// Structural check of the `schema: 1` output document.
fn check_schema(doc: &Value, command: &str) {
    let top = doc.as_object().expect("object");
    for key in top.keys() {
        assert!(
            ["schema", "command", "input", "result", "pass"].contains(&key.as_str()),
            "{key}"
        );
    }
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["command"], command);
    assert!(doc["input"]
        .as_array()
        .unwrap()
        .iter()
        .all(Value::is_string));
    if let Some(p) = top.get("pass") {
        assert!(p.is_boolean());
    }
    let result = doc["result"].as_object().expect("result object");
    for (key, v) in result {
        match key.as_str() {
            "label" | "order" => assert!(v.is_string()),
            "elements" => v.as_array().unwrap().iter().for_each(check_element),
            "witness" => check_element(v),
            "reports" => {
                for r in v.as_array().unwrap() {
                    assert!(r["theorem"].is_string());
                    assert!(r["counts"].is_object());
                    assert!(r["pass"].is_boolean());
                    assert!(r["counterexamples"].is_array());
                    assert!(r["notes"].is_array());
                    assert!(r["wall_time_secs"].is_number());
                    assert_eq!(
                        r["pass"].as_bool().unwrap(),
                        r["counterexamples"].as_array().unwrap().is_empty()
                    );
                }
            }
            other => panic!("unexpected result key {other}"),
        }
    }
}

#[test]
fn json_output_matches_schema_for_every_subcommand() {
    let cases: &[(&[&str], &str)] = &[
        (&["order", "-1/(x+1)"], "order"),
        (&["classify", "(-x-1)/x"], "classify"),
        (&["classify", "x"], "classify"),
        (&["conjugate", "x+1", "-1/x"], "conjugate"),
        (&["closure", "1/x", "-x"], "closure"),
        (&["classify-group", "-1/(x+1)", "1/x"], "classify-group"),
        (&["canonical", "element", "RotTwo"], "canonical"),
        (&["canonical", "group", "G6"], "canonical"),
        (&["verify", "--bound", "1"], "verify"),
    ];
    for (args, command) in cases {
        let mut full = vec!["--json"];
        full.extend_from_slice(args);
        let out = pgl2z(&full);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let doc: Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
        check_schema(&doc, command);
    }
}

#[test]
fn classify_prints_label_and_witness() {
    let out = pgl2z(&["classify", "(-x-1)/x"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("RotThree"));
    let witness = lines.next().unwrap().strip_prefix("witness: ").unwrap();
    let p = parse_element(witness.split("  ").next().unwrap()).unwrap();
    let m = parse_element("(-x-1)/x").unwrap();
    assert_eq!(p.conjugate(&m).unwrap(), parse_element("-1/(x+1)").unwrap());
}

#[test]
fn closure_prints_g4_in_canonical_order() {
    let out = pgl2z(&["closure", "1/x", "-x"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "D2 (4 elements)\n-1/x  [[0,1],[-1,0]]\n1/x  [[0,1],[1,0]]\n-x  [[1,0],[0,-1]]\nx  [[1,0],[0,1]]\n"
    );
}

#[test]
fn classify_group_json_witness_is_valid() {
    let out = pgl2z(&["classify-group", "--json", "(x-2)/(x-1)"]);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["result"]["label"], "PairRot");
    let p = parse_element(doc["result"]["witness"]["matrix"].as_str().unwrap()).unwrap();
    let m = parse_element("(x-2)/(x-1)").unwrap();
    assert_eq!(p.conjugate(&m).unwrap(), parse_element("-1/x").unwrap());
}

#[test]
fn verify_bound_one_passes() {
    let out = pgl2z(&["verify", "--bound", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS ")).count(), 4);
    assert!(!text.contains("FAIL"));
}

#[test]
fn quiet_verify_is_four_lines() {
    let out = pgl2z(&["verify", "-q", "--bound", "1"]);
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn errors_are_single_line_on_stderr() {
    for args in [
        &["order", "(x+1"][..],
        &["order", "2x"],
        &["classify", "x+1"],
        &["closure", "-x", "1-x"],
        &["canonical", "group", "G5"],
        &["nonsense"],
        &["order"],
    ] {
        let out = pgl2z(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn no_color_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_pgl2z"))
        .args(["order", "1/x"])
        .env("NO_COLOR", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&out), "2\n");
}
