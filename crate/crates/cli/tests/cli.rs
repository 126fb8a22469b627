use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value as Json;

fn strata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strata"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim_end().to_string()
}

fn json(args: &[&str]) -> (i32, Json) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = strata(&all);
    let doc = serde_json::from_str(&stdout(&out)).expect("one JSON document");
    (out.status.code().unwrap(), doc)
}

#[test]
fn documented_examples() {
    assert_eq!(stdout(&strata(&["shift", "--r", "1", "x in S{0}"])), "x in S{0,1}");
    assert_eq!(stdout(&strata(&["deriv", "--f", "x^2", "--at", "3"])), "6");
    let (code, doc) = json(&["shadow", "--r", "0", "w0"]);
    assert_eq!((code, doc["error"]["kind"].as_str()), (1, Some("Unlimited")));

    let mut evens = tempfile::NamedTempFile::new().unwrap();
    for x in (0..100).step_by(2) {
        writeln!(evens, "{x}").unwrap();
    }
    let path = evens.path().to_str().unwrap();
    assert_eq!(stdout(&strata(&["density", "--window", "10", "--set", path])), "6/11\nwitness: (0,11)");
}

#[test]
fn sets_can_come_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_strata"))
        .args(["ap", "--k", "5", "--set", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"[0, 2, 4, 6, 8]").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(stdout(&out), "start 0, step 2");
}

#[test]
fn bad_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    let (code, doc) = json(&["density", "--window", "2", "--set", missing.to_str().unwrap()]);
    assert_eq!((code, doc["error"]["kind"].as_str()), (2, Some("IoError")));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 x 3").unwrap();
    let (code, doc) = json(&["ap", "--k", "3", "--set", bad.to_str().unwrap()]);
    assert_eq!((code, doc["error"]["kind"].as_str()), (2, Some("ParseError")));

    let (code, doc) = json(&["rel-density", "--window", "1", "--set", bad.to_str().unwrap(), "--ambient", "-", "--tol", "x"]);
    assert_eq!(code, 2, "{doc}");

    let out = strata(&["ramsey", "--greedy", "--h", "3", "--generator", "pentagon", "--n", "2", "--size", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_with_one() {
    for (args, kind) in [
        (&["ap-free", "--n", "40", "--k", "3"][..], "TooLarge"),
        (&["ap", "--k", "0", "--set", "-"][..], "InvalidInput"),
        (&["--scales", "2", "replay", "--n", "3", "--p", "1"][..], "ScaleExhausted"),
        (&["--scales", "2", "num", "w5"][..], "ScaleExhausted"),
        (&["ho", "--r", "1", "--label", "{0}", "Aall x. x = x"][..], "AdmissibilityError"),
        (&["gt", "--label", "{0}", "v in S{0}"][..], "NotPureInFormula"),
        (&["eval", "E y in S{0}. y = x", "--let", "x=w0"][..], "MissingDomain"),
        (&["eval", "x in y", "--let", "x=1", "--let", "y=2"][..], "TypeMismatch"),
    ] {
        let (code, doc) = json(args);
        assert_eq!((code, doc["error"]["kind"].as_str()), (1, Some(kind)), "{args:?}");
    }
}

#[test]
fn eval_accepts_inline_sets_and_domains() {
    let (code, doc) = json(&["eval", "E y in S{0}. y = x", "--let", "x=w0", "--domain", "y=[0, 1, w0]"]);
    assert_eq!((code, &doc["result"]), (0, &Json::Bool(true)));
    let (_, doc) = json(&["eval", "x in s", "--let", "x=w0 + 1/2", "--let", "s=[1, w0 + 1/2]"]);
    assert_eq!(doc["result"], Json::Bool(true));
    let (_, doc) = json(&["eval", "I{0}{1}(x) = y", "--let", "x=w0 + 1/2", "--let", "y=w1 + 1/2"]);
    assert_eq!(doc["result"], Json::Bool(true));
}

#[test]
fn ultrafilter_commands_report_principal_points() {
    let (_, doc) = json(&["uf-tensor", "--u", "3:1", "--v", "2:0"]);
    assert_eq!(doc["result"]["principal"], 2);
    let (_, doc) = json(&["uf-tensor", "--u", "3:2", "--power", "2", "--label", "{1,3}"]);
    assert_eq!(doc["result"]["principal"], 8);
    let (_, doc) = json(&["uf-check", "--ground", "2", "--exhaustive"]);
    assert_eq!(doc["witness"]["principal"], serde_json::json!([0, 1]));
    let (_, doc) = json(&["uf-check", "--ground", "3", "--coherence", "{0}", "{0,2}"]);
    assert_eq!(doc["result"], Json::Bool(true));
}

#[test]
fn ramsey_greedy_keeps_sentinels() {
    let (_, doc) = json(&["ramsey", "--generator", "constant:1", "--n", "2", "--size", "8", "--greedy"]);
    assert_eq!(doc["result"], serde_json::json!([0, 1, 2, 3, 4, 5, 6]));
    assert_eq!(doc["witness"]["sentinels"], serde_json::json!([7]));
}
