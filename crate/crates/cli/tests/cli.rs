use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn motint(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_motint"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: &str) -> Value {
    let out = motint(args, stdin);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const RAY: &str = r#"{"n":1,"cells":[[{"coeffs":[1],"const":"0","rel":">"}]]}"#;
const SQUARE: &str = r#"{"n":2,"cells":[[
  {"coeffs":[1,0],"const":"0","rel":">="},{"coeffs":[-1,0],"const":"1/2","rel":">="},
  {"coeffs":[0,1],"const":"0","rel":">"},{"coeffs":[0,-1],"const":"3","rel":">"}]]}"#;

#[test]
fn euler_of_open_ray() {
    let v = ok(&["euler"], RAY);
    assert_eq!(v["chi"], json!(-1));
    assert_eq!(v["chi_prime"], json!(0));
}

#[test]
fn volume_and_count() {
    assert_eq!(ok(&["volume"], SQUARE)["volume"], json!("3/2"));
    // x ∈ {0}, y ∈ {1, 2}.
    assert_eq!(ok(&["count", "--r", "1"], SQUARE)["count"], json!(2));
    // x ∈ {0, 1/2}, y ∈ {1/2, …, 5/2}.
    assert_eq!(ok(&["count", "--r", "2"], SQUARE)["count"], json!(10));
}

#[test]
fn volume_param_chambers() {
    let tri = r#"{"n":2,"cells":[[{"coeffs":[0,1],"const":"0","rel":">="},{"coeffs":[1,-1],"const":"0","rel":">="}]]}"#;
    let v = ok(&["volume-param", "--param", "0"], tri);
    let ch = v["chambers"].as_array().unwrap();
    assert!(ch.iter().any(|c| c["polynomial"] == json!([{ "exp": [1], "coeff": "1" }])));
}

#[test]
fn unbounded_volume_is_a_domain_error() {
    let out = motint(&["volume"], RAY);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], json!("unbounded"));
}

#[test]
fn malformed_documents_exit_with_2() {
    let out = motint(&["euler"], "{\"n\": 1,");
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["error"]["line"].is_number());

    let out = motint(&["euler"], r#"{"n":1,"cells":[[{"coeffs":[1,1],"const":"0","rel":">"}]]}"#);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["path"], json!("$.cells[0][0].coeffs"));

    let out = motint(&["euler"], r#"{"n":1,"cells":[[{"coeffs":[1],"const":"x","rel":">"}]]}"#);
    assert_eq!(out.status.code(), Some(2));

    assert_eq!(motint(&["no-such-command"], "").status.code(), Some(2));
}

#[test]
fn singleton_classes() {
    let v = ok(&["singleton-eq", "--a", "1/2,1/3", "--b", "0,1/6"], "");
    assert_eq!(v["equal"], json!(true));
    let v = ok(&["singleton-eq", "--a", "1/5", "--b", "2/5"], "");
    assert_eq!(v["equal"], json!(false));
}

#[test]
fn morphism_check() {
    let doc = json!({
        "x": serde_json::from_str::<Value>(RAY).unwrap(),
        "y": { "n": 1, "cells": [[{ "coeffs": [1], "const": "-1", "rel": ">" }]] },
        "pieces": [{ "domain": [], "matrix": [[1]], "shift": ["1"] }],
    });
    assert_eq!(ok(&["verify-morphism"], &doc.to_string())["valid"], json!(true));
    let doc = json!({
        "x": serde_json::from_str::<Value>(RAY).unwrap(),
        "y": serde_json::from_str::<Value>(RAY).unwrap(),
        "pieces": [{ "domain": [], "matrix": [[2]], "shift": ["0"] }],
    });
    let v = ok(&["verify-morphism"], &doc.to_string());
    assert_eq!(v["valid"], json!(false));
    assert_eq!(v["failure"]["kind"], json!("not_unimodular"));
}

#[test]
fn ev_output_round_trips_through_expand() {
    let datum = r#"{"delta":{"n":2,"cells":[[{"coeffs":[1,0],"const":"0","rel":">="},{"coeffs":[0,1],"const":"0","rel":">="},{"coeffs":[1,-2],"const":"0","rel":">="}]]},
      "h0":{"coeffs":["-1","-1"],"const":"0"},"hs":[{"coeffs":["-1","0"],"const":"0"}]}"#;
    let f = ok(&["ev"], datum);
    let expanded = ok(&["expand", "--order", "9"], &f.to_string());
    let direct = ok(&["ev", "--series", "9"], datum);
    assert_eq!(expanded["series"], direct["series"]);
}

#[test]
fn monomial_datum_verifies_against_the_oracle() {
    let data = motint(&["igusa", "monomial", "--exps", "1"], "");
    assert!(data.status.success());
    let v = ok(&["igusa", "verify", "--p", "5", "--max-m", "5"], &String::from_utf8(data.stdout).unwrap());
    assert_eq!(v["success"], json!(true));
    assert_eq!(v["first_mismatch"], Value::Null);
}

#[test]
fn linear_forms_pipeline() {
    let data = ok(&["igusa", "linear-forms", "--forms", "1,0;1,1"], "");
    let v = ok(&["igusa", "verify", "--p", "5", "--max-m", "4"], &data.to_string());
    assert_eq!(v["success"], json!(true));
    let oracle = ok(&["igusa", "oracle", "--p", "5", "--max-m", "4"], &data.to_string());
    assert_eq!(oracle["series"], v["oracle"]);
    let f = ok(&["igusa", "eval", "--r", "1"], &data.to_string());
    assert!(f["convention"].is_string());
}

#[test]
fn motivic_retractions_and_counts() {
    let j = ok(&["isp-difference"], "");
    for n in 1..=3 {
        let v = ok(&["retract", "--mode", "E", "--n", &n.to_string()], &j.to_string());
        assert_eq!(v["value"], json!([]));
    }
    let point = json!({ "terms": [{ "res": [{ "exp": [1], "coeff": 1 }], "gamma": { "n": 0, "cells": [[]] }, "grade": 1 }] });
    let v = ok(&["specialize", "--q", "7"], &point.to_string());
    assert_eq!(v["count"], json!("7"));
    let out = motint(&["specialize", "--q", "7"], &j.to_string());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic_and_reparses() {
    let a = motint(&["ev"], r#"{"delta":{"n":1,"cells":[[{"coeffs":[1],"const":"0","rel":">="}]]},"h0":{"coeffs":["-1"]},"hs":[]}"#);
    let b = motint(&["ev"], r#"{"delta":{"n":1,"cells":[[{"coeffs":[1],"const":"0","rel":">="}]]},"h0":{"coeffs":["-1"]},"hs":[]}"#);
    assert_eq!(a.stdout, b.stdout);
    let data = ok(&["igusa", "monomial", "--exps", "2,1"], "");
    let again = ok(&["igusa", "eval"], &data.to_string());
    let from_file = {
        let dir = std::env::temp_dir().join(format!("motint-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("datum.json");
        std::fs::write(&p, data.to_string()).unwrap();
        let v = ok(&["igusa", "eval", "--data", p.to_str().unwrap()], "");
        std::fs::remove_dir_all(&dir).unwrap();
        v
    };
    assert_eq!(again, from_file);
}

#[test]
fn selftest_passes() {
    let v = ok(&["selftest", "--seed", "11"], "");
    assert_eq!(v["pass"], json!(true), "{v}");
}
