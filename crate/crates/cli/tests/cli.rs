use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const EX1: &str = r#"{"group": {"kind": "Sp", "rank": 2}, "blocks": [{"t": "3/2", "a": 2}, {"t": "0", "a": 1, "eta": "+"}]}"#;

fn apack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apack"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn uniqueness_on_ex1_passes() {
    let dir = tempfile::tempdir().unwrap();
    let ex1 = write(dir.path(), "ex1.json", EX1);
    let out = apack(&["verify", "uniqueness", "--spec", ex1.to_str().unwrap(), "--offsets", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["results"]["uniqueness"]["psi_plus"], "Sp(4,R): I_13/2⊗R[2] ⊕ triv⊗R[1]");
    assert_eq!(r["results"]["uniqueness"]["check"]["unique"], true);
}

#[test]
fn twisted_trace_example() {
    let out = apack(&["verify", "twisted-trace", "--n", "3", "--mu", "1,0,-1", "--trials", "100", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["seed"], 7);
    let residual: f64 = r["results"]["twisted_trace"]["max_residual"].as_str().unwrap().parse().unwrap();
    assert!(residual <= 1e-9);
}

#[test]
fn bad_parity_is_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"group": {"kind": "Sp", "rank": 2}, "blocks": [{"t": "1", "a": 2}, {"t": "0", "a": 1}]}"#,
    );
    let bad = bad.to_str().unwrap();
    let out = apack(&["verify", "parity", "--spec", bad]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["verdicts"]["parity"]["status"], "fail");
    assert_eq!(r["verdicts"]["parity"]["violations"].as_array().unwrap().len(), 1);
    // Commands that need good parity report it instead of failing hard.
    assert_eq!(apack(&["dominate", "--spec", bad]).status.code(), Some(1));
    // info accepts it.
    assert_eq!(apack(&["info", "--spec", bad]).status.code(), Some(0));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases = [
        EX1.replacen("\"rank\": 2", "\"rank\": 2, \"foo\": 1", 1),
        EX1.replacen("\"a\": 1", "\"a\": 3", 1),
        EX1.replacen("\"3/2\"", "\"3/4\"", 1),
        EX1.replacen("\"+\"", "\"?\"", 1),
        "{".to_string(),
        "[]".to_string(),
    ];
    for (i, body) in cases.iter().enumerate() {
        let p = write(d, &format!("c{i}.json"), body);
        let out = apack(&["info", "--spec", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{body}");
        assert!(out.stdout.is_empty());
    }
    let ex1 = write(d, "ex1.json", EX1);
    let ex1 = ex1.to_str().unwrap();
    for args in [
        vec!["dominate", "--spec", ex1, "--offsets", "1/2"],
        vec!["dominate", "--spec", ex1, "--offsets", "1"],
        vec!["dominate", "--spec", ex1, "--offsets", "5,5"],
        vec!["info", "--spec", "/nonexistent/spec.json"],
        vec!["verify", "twisted-trace", "--mu", "1,2"],
        vec!["verify", "twisted-trace", "--n", "40"],
        vec!["verify", "uniqueness"],
        vec!["verify", "nonsense"],
        vec!["info"],
    ] {
        assert_eq!(apack(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn json_and_text_agree_on_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let ex1 = write(dir.path(), "ex1.json", EX1);
    let ex1 = ex1.to_str().unwrap();
    let j = apack(&["verify", "filtration", "--spec", ex1]);
    let t = apack(&["verify", "filtration", "--spec", ex1, "--format", "text"]);
    assert_eq!(j.status.code(), t.status.code());
    let text = String::from_utf8(t.stdout).unwrap();
    let r = json(&j);
    assert!(text.contains(&format!("verdict: {}", r["verdict"].as_str().unwrap())));
    assert!(text.contains(&format!("input_sha256: {}", r["input_sha256"].as_str().unwrap())));
}

#[test]
fn packet_translation() {
    let dir = tempfile::tempdir().unwrap();
    let ex1 = write(dir.path(), "ex1.json", EX1);
    let plus = write(
        dir.path(),
        "plus.json",
        r#"{"group": {"kind": "Sp", "rank": 2},
            "blocks": [{"t": "13/2", "a": 2}, {"t": "0", "a": 1}],
            "entries": [{"levi": [[2, 0]], "character": [1, 1]},
                        {"levi": [[1, 1]], "character": [-1, 1]}]}"#,
    );
    let out = apack(&["packet", "--spec", ex1.to_str().unwrap(), "--plus-packet", plus.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let p = &r["results"]["packet"];
    assert_eq!(p["entries"].as_array().unwrap().len(), 2);
    assert_eq!(p["entries"][1]["t_tilde"], serde_json::json!([3]));
    assert_eq!(p["entries"][1]["levi"], "U(1,1)×Sp(0,R)");

    let wrong = write(
        dir.path(),
        "wrong.json",
        r#"{"group": {"kind": "Sp", "rank": 2},
            "blocks": [{"t": "13/2", "a": 2}, {"t": "0", "a": 1}],
            "entries": [{"levi": [[2, 0]], "character": [1, 1, 1]}]}"#,
    );
    let out = apack(&["packet", "--spec", ex1.to_str().unwrap(), "--plus-packet", wrong.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn options_in_the_spec_file_are_used() {
    let dir = tempfile::tempdir().unwrap();
    let with_opts = EX1.replacen(
        "]}",
        r#"], "options": {"offsets": ["5"], "seed": 9, "threshold": "5"}}"#,
        1,
    );
    let p = write(dir.path(), "opts.json", &with_opts);
    let out = apack(&["verify", "uniqueness", "--spec", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["seed"], 9);
    assert_eq!(r["results"]["uniqueness"]["check"]["offsets"], serde_json::json!([5]));
}
