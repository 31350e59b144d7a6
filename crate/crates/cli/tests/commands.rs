use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn kleinrp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kleinrp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_parabolic_and_order_two() {
    let out = kleinrp(&["classify", "--matrix", "1,1;0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["beta"], 0.0);
    assert_eq!(v["class"], "parabolic");

    let v = json(&kleinrp(&["classify", "--matrix", "0,-1;1,0"]));
    assert_eq!(v["class"], "elliptic");
    assert_eq!(v["order"], 2);

    let v = json(&kleinrp(&["classify", "--matrix", "2,0;0,0.5"]));
    assert_eq!(v["class"], "hyperbolic");
    assert!((v["translation_length"].as_f64().unwrap() - 2.0 * 2f64.ln()).abs() < 1e-12);
}

#[test]
fn malformed_input_exits_two() {
    for args in [
        vec!["classify", "--matrix", "1,1;0"],
        vec!["classify", "--matrix", "a,b;c,d"],
        vec!["classify", "--matrix", "1,2;2,4"],
        vec!["decide", "--beta-f", "x", "--gamma", "-1"],
        vec!["decide", "--beta-f", "-3"],
    ] {
        let out = kleinrp(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn decide_exit_codes_and_reports() {
    let out = kleinrp(&["decide", "--beta-f=-3", "--gamma=-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "discrete");
    assert_eq!(v["p"], "3");
    assert_eq!(v["presentation"]["label"], "Tet[3,inf;3]");
    assert!(v["presentation"]["max_relator_deviation"].as_f64().unwrap() < 1e-9);

    let out = kleinrp(&["decide", "--beta-f=-3", "--gamma=-0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "non-discrete");

    let out = kleinrp(&["decide", "--beta-f=-3", "--gamma=2"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["verdict"], "out-of-scope");
    assert_eq!(v["scope"], "invariant-plane");
}

#[test]
fn decide_reports_reduction_and_witness() {
    let beta = format!("--beta-f={}", -4.0 * (2.0 * PI / 5.0).sin().powi(2));
    let out = kleinrp(&["decide", &beta, "--gamma=-1", "--witness-depth", "8"]);
    let v = json(&out);
    let audit: Vec<&str> = v["audit"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
    assert!(audit.iter().any(|a| a.starts_with("primitive_reduction")), "{audit:?}");
    // reduced gamma is -4cos²(2π/5): h rotates through 2π·2/5
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(v["p"], "5/2");
    assert_eq!(v["h_type"], "elliptic-non-primitive");
    assert!(v["witness"]["word"].is_string());
}

#[test]
fn decide_from_matrices() {
    let out = kleinrp(&["decide", "--matrices", "0.5,0.75i;i,0.5", "1,1;0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["p"], "3");
    assert!(v["inconsistency"].is_null());
    // same pair conjugated by z ↦ 2z + 1
    let out = kleinrp(&["decide", "--matrices", "0.5+0.5i,i;0.5i,0.5-0.5i", "1,2;0,1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn polyhedron_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let path_str = path.to_str().unwrap();
    let out = kleinrp(&["polyhedron", "--beta-f=-3", "--gamma=-2", "--out", path_str]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let sigma_tau = v["relations"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["pair"][0] == "sigma" && r["pair"][1] == "tau")
        .unwrap();
    assert_eq!(sigma_tau["tag"], "intersect");
    assert!((sigma_tau["angle_or_distance"].as_f64().unwrap() - PI / 4.0).abs() < 1e-12);
    assert_eq!(v["planes"].as_array().unwrap().len(), 4);
    assert_eq!(v["kappa1"]["kind"], "vertical");

    let out = kleinrp(&["polyhedron", "--beta-f=-3", "--gamma=-6", "--out", path_str]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let rel = &v["relations"].as_array().unwrap()[5];
    assert_eq!(rel["pair"], serde_json::json!(["sigma", "tau"]));
    assert_eq!(rel["tag"], "disjoint");
    assert!((rel["angle_or_distance"].as_f64().unwrap() - 2f64.acosh() / 2.0).abs() < 1e-12);

    let missing = dir.path().join("none.json");
    let out = kleinrp(&["polyhedron", "--beta-f=-3", "--gamma=2", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!missing.exists());
}

#[test]
fn scan_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let p = path.to_str().unwrap();
    let out = kleinrp(&["scan", "--beta-f=-3", "--gamma-min=-1", "--gamma-max=-2", "--step=0.1", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&path).unwrap(), "gamma,verdict,p,label\n");

    let out = kleinrp(&["scan", "--beta-f=-3", "--gamma-min=-2", "--gamma-max=-1", "--step=0", "--out", p]);
    assert_eq!(out.status.code(), Some(2));
    let out = kleinrp(&["scan", "--beta-f=-3", "--gamma-min=-2", "--gamma-max=-1", "--step=-0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = kleinrp(&["scan", "--beta-f=-3", "--gamma-min=-2", "--gamma-max=1", "--step=0.5"]);
    assert_eq!(out.status.code(), Some(2));

    let out = kleinrp(&["scan", "--beta-f=-3", "--gamma-min=-4.5", "--gamma-max=-1", "--step=0.5", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[1], "-4.5,discrete,binf,\"GT[3,inf;binf]\"");
    assert_eq!(lines[8], "-1.0,discrete,3,\"Tet[3,inf;3]\"");
}

#[test]
fn identical_inputs_give_identical_bytes() {
    for args in [
        vec!["decide", "--beta-f=-3", "--gamma=-2"],
        vec!["polyhedron", "--beta-f=5", "--gamma=-1.5"],
        vec!["scan", "--beta-f=0", "--gamma-min=-5", "--gamma-max=-0.5", "--step=0.01"],
    ] {
        let a = kleinrp(&args);
        let b = kleinrp(&args);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
