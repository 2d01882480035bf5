use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(name)
}

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_residual-trace"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn trace_of_the_parabola() {
    let o = run(&["trace", "--count", "4", corpus("parabola.json").to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let nums: Vec<String> = v["u"]
        .as_array()
        .unwrap()
        .iter()
        .map(|u| serde_json::to_string(&u["num"]["terms"]).unwrap())
        .collect();
    assert_eq!(
        nums,
        [
            "[]",
            r#"[{"coeff":"1","exps":[0]}]"#,
            "[]",
            r#"[{"coeff":"1","exps":[1]}]"#
        ]
    );
}

#[test]
fn schema_errors_name_the_field_and_exit_2() {
    let bad = r#"{"n":1,"P":{"vars":["x","y"]},"r":{"vars":["x","y"],"terms":[]}}"#;
    let o = run(&["trace"], bad);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("terms"), "{}", stderr(&o));

    let o = run(&["trace"], "{not json");
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["reconstruct"], r#"{"u":[{"num":{"vars":["x"],"terms":[{"coeff":"1/0","exps":[0]}]}}]}"#);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    // P not monic in y.
    let c = r#"{"n":1,"P":{"vars":["x","y"],"terms":[{"coeff":"2","exps":[0,1]}]},"r":{"vars":["x","y"],"terms":[{"coeff":"1","exps":[0,0]}]}}"#;
    let o = run(&["trace"], c);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("monic"), "{}", stderr(&o));

    // u_k = x^{-k}: the recurrence has a meromorphic coefficient.
    let t = r#"{"u":[
        {"num":{"vars":["x"],"terms":[{"coeff":"1","exps":[0]}]},"den":{"vars":["x"],"terms":[{"coeff":"1","exps":[0]}]}},
        {"num":{"vars":["x"],"terms":[{"coeff":"1","exps":[0]}]},"den":{"vars":["x"],"terms":[{"coeff":"1","exps":[1]}]}},
        {"num":{"vars":["x"],"terms":[{"coeff":"1","exps":[0]}]},"den":{"vars":["x"],"terms":[{"coeff":"1","exps":[2]}]}},
        {"num":{"vars":["x"],"terms":[{"coeff":"1","exps":[0]}]},"den":{"vars":["x"],"terms":[{"coeff":"1","exps":[3]}]}}]}"#;
    let o = run(&["reconstruct"], t);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("meromorphic"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["trace", "--count", "0"], "").status.code(), Some(2));
    assert_eq!(run(&["verify", "--tolerance", "-1"], "").status.code(), Some(2));
    assert_eq!(run(&["trace", "/nonexistent/file.json"], "").status.code(), Some(2));
    let o = run(&["trace", "--count", "6", corpus("parabola.json").to_str().unwrap()], "");
    let clash = run(&["reconstruct", "--fiber", "x"], &stdout(&o));
    assert_eq!(clash.status.code(), Some(2));
}

#[test]
fn help_documents_the_schemas() {
    let o = run(&["--help"], "");
    assert_eq!(o.status.code(), Some(0));
    let help = stdout(&o);
    for needle in ["\"terms\"", "\"series\"", "RESIDUAL_TRACE_THREADS", "exit"] {
        assert!(help.to_lowercase().contains(&needle.to_lowercase()), "missing {needle}");
    }
}

#[test]
fn radon_with_closedness() {
    let o = run(
        &["radon", "--kmax", "3", "--check-closedness", corpus("cubic.json").to_str().unwrap()],
        "",
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vars"], serde_json::json!(["a", "b"]));
    assert_eq!(v["u_ab"].as_array().unwrap().len(), 4);
    assert_eq!(v["closedness_violations"], serde_json::json!([]));
}

#[test]
fn continuation_from_a_geometric_series() {
    // u_k = (2x)^k: the single point y = 2x with weight 1.
    let coeffs = |k: u32| -> Vec<String> {
        (0..8).map(|j| if j == k { (1u64 << k).to_string() } else { "0".into() }).collect()
    };
    let series: Vec<serde_json::Value> = (0..4)
        .map(|k| serde_json::json!({ "x0": "0", "coeffs": coeffs(k) }))
        .collect();
    let input = serde_json::json!({ "series": series }).to_string();
    let o = run(&["continue", "--dmax", "2", "--max-num-deg", "3", "--max-den-deg", "0"], &input);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let expected = r#"{"P":{"terms":[{"coeff":"-2","exps":[1,0]},{"coeff":"1","exps":[0,1]}],"vars":["x","y"]},"n":1,"r":{"terms":[{"coeff":"1","exps":[0,0]}],"vars":["x","y"]}}"#;
    assert_eq!(stdout(&o).trim_end(), expected);
}

#[test]
fn verify_report_passes() {
    let o = run(&["verify", "--instances", "6"], "");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], serde_json::json!(true));
    assert_eq!(v["instances"], serde_json::json!(6));
}

#[test]
fn verify_a_given_current() {
    let o = run(&["verify", "--current", corpus("surface.json").to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn thread_count_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_residual-trace"))
        .args(["verify", "--instances", "2"])
        .env("RESIDUAL_TRACE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
