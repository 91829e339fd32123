use std::process::{Command, Output};

use serde_json::Value;

fn porac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_porac")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = porac(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn bounds_for_three_three() {
    let r = json(&["bounds", "--n", "3", "--g", "3", "--format", "json"]);
    assert_eq!(r["pnc_bound"], "5/6");
    assert_eq!(r["classical_search"]["value"], "5/6");
    assert_eq!(r["classical_search"]["mode"], "exhaustive");
    assert_eq!(r["provenance"]["classical_search"], "exhaustive");
}

#[test]
fn explicit_four_four() {
    let r = json(&["quantum", "--n", "4", "--g", "4", "--method", "explicit", "--format", "json"]);
    assert!((num(&r["quantum"]["value"]) - 0.926777).abs() < 1e-6);
    assert!((num(&r["delta_trace"]) - (32.0 + 16.0 * 2f64.sqrt())).abs() < 1e-9);
    assert!((num(&r["quantum"]["margin_over_pnc"]) - 0.051777).abs() < 1e-6);
    assert_eq!(r["provenance"]["quantum"], "analytic");
    assert!(r["po_checks"].as_array().unwrap().iter().all(|c| num(&c["max_violation"]) < 1e-12));
}

#[test]
fn seesaw_four_three() {
    let r = json(&["quantum", "--n", "4", "--g", "3", "--method", "seesaw", "--restarts", "50", "--seed", "7"]);
    assert!(num(&r["quantum"]["value"]) > 0.76);
    assert_eq!(r["provenance"]["quantum"], "seesaw(7, 50)");
    assert!(!r["po_checks"].as_array().unwrap().is_empty());
}

#[test]
fn keys_follow_report_order() {
    let r = json(&["ontic", "--n", "3"]);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["n", "g", "pnc_bound", "quantum", "delta_trace", "ontic_trace_bound", "po_checks", "provenance", "timings"]
    );
    assert_eq!(r["ontic_trace_bound"], 16);
}

#[test]
fn reports_are_reproducible() {
    let args = ["quantum", "--n", "3", "--method", "seesaw", "--dim", "4", "--restarts", "8", "--seed", "3"];
    let mut a = json(&args);
    let mut b = json(&args);
    a.as_object_mut().unwrap().remove("timings");
    b.as_object_mut().unwrap().remove("timings");
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn entangled_and_interferometer() {
    let r = json(&["entangled"]);
    assert!((num(&r["bell"]["expectation"]) - (2.0 + 2.0 * 2f64.sqrt())).abs() < 1e-9);
    assert!((num(&r["bell"]["success"]) - num(&r["bell"]["two_bit_success"])).abs() < 1e-11);
    let r = json(&["interferometer"]);
    assert_eq!(r["interferometer"]["assignment"].as_array().unwrap().len(), 8);
    assert!(num(&r["interferometer"]["min_fidelity"]) > 1.0 - 1e-12);
}

#[test]
fn table_csv() {
    let out = porac(&["table", "--n", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,g,pnc_bound,quantum_value,margin,method,provenance"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().any(|r| r.starts_with("4,4,7/8,0.926776695297,")));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("porac-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = porac(&["bounds", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["pnc_bound"], "3/4");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(porac(&["bounds", "--frobnicate"]).status.code(), Some(1));
    assert_eq!(porac(&["bounds", "--n", "2", "--g", "3"]).status.code(), Some(1));
    assert_eq!(porac(&["quantum", "--method", "nope"]).status.code(), Some(1));
    assert_eq!(porac(&["entangled", "--n", "4"]).status.code(), Some(1));
    assert_eq!(porac(&["quantum", "--n", "3", "--g", "2", "--method", "seesaw"]).status.code(), Some(1));
    assert_eq!(porac(&["--help"]).status.code(), Some(0));
}
