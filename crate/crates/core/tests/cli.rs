use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use hnstrata::cli::run;
use hnstrata::hntype::validate_hn_type;
use hnstrata::numpoly::NumPoly;
use serde_json::{json, Value};
use tempfile::TempDir;

const JUMP: &str = r#"{"points":["g","s"],"specializes":[["g","s"]],
    "fibers":{"g":{"degrees":[0,0]},"s":{"degrees":[1,-1]}}}"#;
const REVERSED: &str = r#"{"points":["g","s"],"specializes":[["g","s"]],
    "fibers":{"g":{"degrees":[1,-1]},"s":{"degrees":[0,0]}}}"#;

struct Scratch(TempDir);

impl Scratch {
    fn new() -> Self {
        Scratch(TempDir::new().unwrap())
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let path = self.0.path().join(name);
        fs::write(&path, contents).unwrap();
        path.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hnstrata").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn parse(s: &str) -> Value {
    serde_json::from_str(s.trim()).unwrap()
}

fn binary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hnstrata"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn validate_type_rejects_equal_slopes() {
    let dir = Scratch::new();
    let t = dir.file("t.json", r#"[["0","1"],["0","2"]]"#);
    let (code, out, err) = call(&["validate-type", "--type", &t]);
    assert_eq!(code, 1);
    assert_eq!(parse(&out)["valid"], json!(false));
    assert_eq!(parse(&err)["error"], json!("Condition3Violation"));
    assert_eq!(parse(&err)["index"], json!(2));
}

#[test]
fn validate_type_accepts_and_reports_ranks() {
    let dir = Scratch::new();
    let t = dir.file("t.json", r#"[["6","2"],["7","3"],["7","4"]]"#);
    let (code, out, _) = call(&["validate-type", "--type", &t]);
    assert_eq!(code, 0);
    let v = parse(&out);
    assert_eq!(v["valid"], json!(true));
    assert_eq!(v["length"], json!(3));
    assert_eq!(v["ranks"], json!(["2", "3", "4"]));
}

#[test]
fn hn_of_splitting_type() {
    let dir = Scratch::new();
    let input = dir.file("e.json", r#"{"degrees":[2,2,0,-1]}"#);
    let (code, out, _) = call(&["hn", "--input", &input, "--oracle"]);
    assert_eq!(code, 0);
    let v = parse(&out);
    assert_eq!(v["type"], json!([["6", "2"], ["7", "3"], ["7", "4"]]));
    assert_eq!(v["length"], json!(3));
    assert_eq!(v["semistable"], json!(false));
    assert_eq!(v["oracle"]["unique_and_equal"], json!(true));
    assert_eq!(v["oracle"]["closed_form_agrees"], json!(true));
}

#[test]
fn hn_of_explicit_lattice() {
    let dir = Scratch::new();
    let input = dir.file(
        "l.json",
        r#"{"nodes":["0","A","E"],"leq":[["0","A"],["A","E"]],
            "P":{"0":[],"A":["3","1"],"E":["3","2"]}}"#,
    );
    let (code, out, _) = call(&["hn", "--input", &input]);
    assert_eq!(code, 0);
    let v = parse(&out);
    assert_eq!(v["filtration"]["steps"], json!(["0", "A", "E"]));
    assert_eq!(v["type"], json!([["3", "1"], ["3", "2"]]));
}

#[test]
fn stratify_jump_family() {
    let dir = Scratch::new();
    let input = dir.file("f.json", JUMP);
    let tau = dir.file("tau.json", r#"[["2","1"],["2","2"]]"#);
    let (code, out, _) = call(&["stratify", "--input", &input, "--tau", &tau, "--oracle"]);
    assert_eq!(code, 0);
    let v = parse(&out);
    assert_eq!(v["strata"].as_array().unwrap().len(), 2);
    assert!(v["checks"]
        .as_object()
        .unwrap()
        .values()
        .all(|c| c == &json!(true)));
    assert_eq!(v["tau"]["recursive"], json!(["s"]));
    assert_eq!(v["tau"]["direct"], json!(["s"]));
    assert_eq!(v["oracle"]["agrees"], json!(true));
}

#[test]
fn reversed_family_is_not_semicontinuous() {
    let dir = Scratch::new();
    let input = dir.file("f.json", REVERSED);
    let (code, out, err) = call(&["check-family", "--input", &input]);
    assert_eq!(code, 1);
    assert_eq!(parse(&out)["semicontinuous"], json!(false));
    let witness = &parse(&err)["witness"];
    assert_eq!(witness["generic"], json!("g"));
    assert_eq!(witness["special"], json!("s"));

    let (code, _, err) = call(&["stratify", "--input", &input]);
    assert_eq!(code, 1);
    assert_eq!(parse(&err)["witness"]["generic"], json!("g"));

    let input = dir.file("ok.json", JUMP);
    let (code, out, _) = call(&["check-family", "--input", &input]);
    assert_eq!(code, 0);
    assert_eq!(parse(&out), json!({ "semicontinuous": true }));
}

#[test]
fn malformed_input_exits_two() {
    let dir = Scratch::new();
    let bad = dir.file("bad.json", "{not json");
    for cmd in ["hn", "stratify", "check-family"] {
        let (code, _, err) = call(&[cmd, "--input", &bad]);
        assert_eq!(code, 2, "{cmd}");
        assert_eq!(parse(&err)["error"], json!("MalformedInput"));
    }
    let (code, _, _) = call(&["validate-type", "--type", &bad]);
    assert_eq!(code, 2);
    let (code, _, _) = call(&["hn", "--input", dir.path("missing.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _, _) = call(&["no-such-command"]);
    assert_eq!(code, 2);
}

#[test]
fn compare_and_shift() {
    let dir = Scratch::new();
    let a = dir.file("a.json", r#"[["2","2"]]"#);
    let b = dir.file("b.json", r#"[["2","1"],["2","2"]]"#);
    let (code, out, _) = call(&["compare-types", "--type", &a, "--type", &b]);
    assert_eq!(code, 0);
    assert_eq!(parse(&out), json!({ "relation": "LEQ" }));
    let (_, out, _) = call(&["compare-types", "--type", &b, "--type", &a]);
    assert_eq!(parse(&out), json!({ "relation": "GEQ" }));
    let (_, out, _) = call(&["compare-types", "--type", &a, "--type", &a]);
    assert_eq!(parse(&out), json!({ "relation": "EQ" }));

    let t = dir.file("t.json", r#"[["6","2"],["7","3"],["7","4"]]"#);
    let (code, out, _) = call(&["shift", "--type", &t]);
    assert_eq!(code, 0);
    assert_eq!(parse(&out), json!([["1", "1"], ["1", "2"]]));
    let (code, _, err) = call(&["shift", "--type", &a]);
    assert_eq!(code, 1);
    assert_eq!(parse(&err)["error"], json!("TooShortForShift"));
}

#[test]
fn polygon_with_svg() {
    let dir = Scratch::new();
    let t = dir.file("t.json", r#"[["6","2"],["7","3"],["7","4"]]"#);
    let svg = dir.path("p.svg");
    let (code, out, _) = call(&[
        "polygon",
        "--type",
        &t,
        "--at",
        "1",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v = parse(&out);
    assert_eq!(v["at"], json!("1"));
    let values: Vec<&str> = v["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["0", "8", "10", "11"]);
    let drawing = fs::read_to_string(svg).unwrap();
    assert!(drawing.starts_with("<svg"));
    assert!(drawing.contains("<path d=\"M"));
}

#[test]
fn binary_output_is_deterministic() {
    let dir = Scratch::new();
    let input = dir.file("f.json", JUMP);
    let first = binary(&["stratify", "--input", &input]);
    assert_eq!(first.status.code(), Some(0));
    for _ in 0..3 {
        assert_eq!(
            binary(&["stratify", "--input", &input]).stdout,
            first.stdout
        );
    }
    let bad = binary(&["check-family", "--input", &dir.file("r.json", REVERSED)]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn outputs_round_trip() {
    let dir = Scratch::new();
    let input = dir.file("e.json", r#"{"degrees":[3,1,1,-2]}"#);
    let (_, out, _) = call(&["hn", "--input", &input]);
    let ty = parse(&out)["type"].clone();
    let polys: Vec<NumPoly> = serde_json::from_value(ty.clone()).unwrap();
    assert!(validate_hn_type(polys).is_ok());
    let t = dir.file("t.json", &ty.to_string());
    let (code, out, _) = call(&["validate-type", "--type", &t]);
    assert_eq!(code, 0);
    assert_eq!(parse(&out)["type"], ty);
    let (code, out, _) = call(&["shift", "--type", &t]);
    assert_eq!(code, 0);
    let s = dir.file("s.json", out.trim());
    assert_eq!(call(&["validate-type", "--type", &s]).0, 0);
}
