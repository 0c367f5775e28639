use std::fs;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn thetam(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_thetam"))
        .args(args)
        .arg("--json")
        .output()
        .expect("binary runs");
    let report: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().unwrap(), report)
}

fn tmp(name: &str, body: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn three_point_space_under_sum_plus_product() {
    let (code, rep) = thetam(&["validate-space", "--space", "builtin:three-point", "--action", "builtin:sum_plus_prod"]);
    assert_eq!(code, 0);
    assert_eq!(rep["status"], "pass");
    assert_eq!(rep["result"]["triangle_families"], 0);
}

#[test]
fn three_point_space_under_sum_has_a_witness() {
    let (code, rep) = thetam(&["validate-space", "--space", "builtin:three-point", "--action", "builtin:k_sum:k=1"]);
    assert_eq!(code, 1);
    assert_eq!(rep["result"]["triangle_families"], 1);
    let v = &rep["violations"][0];
    assert_eq!(v["kind"], "triangle");
    assert_eq!((v["lhs"].as_f64(), v["rhs"].as_f64()), (Some(10.0), Some(8.0)));
    assert_eq!(v["labels"][2], "x");
}

#[test]
fn missing_map_is_an_input_error() {
    let (code, rep) = thetam(&["banach", "--space", "builtin:three-point", "--map", "/definitely/not/here.json"]);
    assert_eq!(code, 2);
    assert_eq!(rep["status"], "error");
    assert!(rep["result"].is_null());
    assert!(rep["error"].as_str().unwrap().contains("cannot read map file"));
}

#[test]
fn input_errors_stop_before_computing() {
    let bad = tmp("broken.json", "{ not json");
    for args in [
        vec!["validate-space", "--space", "builtin:nope"],
        vec!["validate-space", "--space", bad.to_str().unwrap()],
        vec!["eta", "--action", "builtin:sum", "--r", "1", "--s", "2"],
        vec!["ball", "--space", "builtin:three-point", "--center", "w", "--radius", "1"],
        vec!["check-action", "--action", "builtin:k_sum:k=2"],
        vec!["caristi", "--space", "builtin:three-point"],
        vec!["uniformity-base"],
    ] {
        let (code, rep) = thetam(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(rep["result"].is_null(), "{args:?}");
        assert!(rep["violations"].as_array().unwrap().is_empty());
    }
}

#[test]
fn json_inputs_from_files() {
    let space = tmp(
        "line.json",
        r#"{"points": ["a", "b", "c"], "distances": [[0, 1, 3], [1, 0, 2], [3, 2, 0]]}"#,
    );
    let action = tmp("sum.json", r#"{"kind": "k_sum", "params": {"k": 1}}"#);
    let map = tmp("shrink.json", r#"{"map": {"a": "a", "b": "a", "c": "b"}}"#);
    let (code, rep) = thetam(&[
        "validate-space",
        "--space",
        space.to_str().unwrap(),
        "--action",
        action.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{rep}");
    let (code, rep) = thetam(&[
        "banach",
        "--space",
        space.to_str().unwrap(),
        "--map",
        map.to_str().unwrap(),
        "--start",
        "c",
    ]);
    assert_eq!(code, 0, "{rep}");
    assert_eq!(rep["result"]["result"], "a");
    assert_eq!(rep["result"]["iterates"], serde_json::json!(["c", "b", "a", "a"]));
}

#[test]
fn strict_and_existence_inverse() {
    let args = ["eta", "--action", "builtin:k_sum:k=0.25", "--r", "1", "--s", "0.1"];
    let (code, rep) = thetam(&args);
    assert_eq!(code, 1);
    assert!(rep["error"].as_str().unwrap().contains("[0, r]") || rep["violations"][0]["error"].is_string());
    let (code, rep) = thetam(&[&args[..], &["--mode", "existence"]].concat());
    assert_eq!(code, 0);
    let t = rep["result"]["t"].as_f64().unwrap();
    assert!((t - 3.9).abs() < 1e-12);
}

#[test]
fn product_saturation_fails_the_checker() {
    let (code, rep) = thetam(&["check-action", "--action", "builtin:prod_over_one_plus_prod", "--samples", "500"]);
    assert_eq!(code, 1);
    assert_eq!(rep["result"]["conditions"]["strict_monotonicity"]["holds"], false);
    let w = rep["violations"]
        .as_array()
        .unwrap()
        .iter()
        .find(|w| w["condition"] == "strict_monotonicity")
        .unwrap();
    assert_eq!(w["replays"], true);
}

#[test]
fn contraction_fixture_converges() {
    let (code, rep) = thetam(&["banach", "--space", "builtin:contraction-5pt", "--start", "q4"]);
    assert_eq!(code, 0);
    assert_eq!(rep["result"]["result"], "q0");
    assert_eq!(rep["result"]["unique"], true);
    assert_eq!(rep["result"]["contraction_estimate"].as_f64(), Some(0.5));
}

#[test]
fn caristi_and_endpoint_on_the_chain() {
    for cmd in ["caristi", "endpoint"] {
        let (code, rep) = thetam(&[cmd, "--space", "builtin:caristi-chain"]);
        assert_eq!(code, 0, "{cmd}: {rep}");
        assert_eq!(rep["result"]["point"], "p2");
        assert_eq!(rep["result"]["minimal"], serde_json::json!(["p2"]));
        assert_eq!(rep["result"]["fixed"], true);
    }
}

#[test]
fn reports_repeat_byte_for_byte() {
    let strip = |v: &mut Value| v.as_object_mut().unwrap().remove("timing_ms");
    for args in [
        vec!["check-action", "--action", "builtin:sum_plus_prod", "--samples", "300", "--seed", "9"],
        vec!["caristi", "--space", "builtin:cube-root-chain"],
    ] {
        let (_, mut a) = thetam(&args);
        let (_, mut b) = thetam(&args);
        strip(&mut a);
        strip(&mut b);
        assert_eq!(a.to_string(), b.to_string());
    }
}

#[test]
fn fixture_dump_round_trips() {
    let (code, rep) = thetam(&["fixtures", "caristi-chain"]);
    assert_eq!(code, 0);
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let mut paths = Vec::new();
    for key in ["space", "map", "caristi"] {
        let p = dir.join(format!("chain-{key}.json"));
        fs::write(&p, rep["result"][key].to_string()).unwrap();
        paths.push(p.to_string_lossy().into_owned());
    }
    let (code, out) = thetam(&[
        "caristi",
        "--action",
        "builtin:sum",
        "--space",
        &paths[0],
        "--map",
        &paths[1],
        "--caristi",
        &paths[2],
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["result"]["point"], "p2");
}

#[test]
fn human_output_by_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_thetam"))
        .args(["uniformity-base", "--action", "builtin:sum", "--n", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("uniformity-base: PASS (exit 0)"), "{text}");
    assert!(text.contains("m: 3"));
}
