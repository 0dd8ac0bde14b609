//! End-to-end checks of the command-line interface: exit codes
//! (0 = pass, 1 = report failure, 2 = input error) and the
//! groupoid/certificate file round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn germs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_germs"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn build_valid_table_exits_zero() {
    let out = germs(&["build", data("i2.sgrp").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn build_invalid_table_exits_two() {
    let out = germs(&["build", data("left_zero.sgrp").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_file_exits_two() {
    let out = germs(&["spectrum", "/nonexistent/path.sgrp"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_certificate_exits_one() {
    let dir = tempfile::tempdir().unwrap();

    let out = germs(&["germs", data("i2_natural.act").to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let groupoid_path = dir.path().join("groupoid.json");
    std::fs::write(&groupoid_path, &out.stdout).unwrap();

    let gj: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let n_arrows = gj["arrows"].as_array().unwrap().len();

    // An all-zero function violates the fiber-sum condition.
    let bad = serde_json::json!({
        "orientation": "r",
        "functions": [vec![0.0; n_arrows]],
        "tolerances": [0.0],
    });
    let cert_path = dir.path().join("zero.cert.json");
    std::fs::write(&cert_path, serde_json::to_string(&bad).unwrap()).unwrap();

    let out = germs(&[
        "check",
        groupoid_path.to_str().unwrap(),
        cert_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));

    // The uniform function passes through the same file round trip.
    let good = serde_json::json!({
        "orientation": "r",
        "functions": [gj["arrows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|a| {
                let rng = a["rng"].as_u64().unwrap();
                let fiber = gj["arrows"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .filter(|b| b["rng"].as_u64() == Some(rng))
                    .count();
                1.0 / fiber as f64
            })
            .collect::<Vec<f64>>()],
        "tolerances": [1e-9],
    });
    std::fs::write(&cert_path, serde_json::to_string(&good).unwrap()).unwrap();
    let out = germs(&[
        "check",
        groupoid_path.to_str().unwrap(),
        cert_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn dot_export_is_well_formed() {
    let out = germs(&["germs", data("remark_z2_wp.act").to_str().unwrap(), "--dot"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.trim_end().ends_with('}'));
}

#[test]
fn rho_verify_exits_zero_on_valid_action() {
    let out = germs(&[
        "rho",
        data("remark_z2_wp.act").to_str().unwrap(),
        "--verify",
    ]);
    assert_eq!(out.status.code(), Some(0));
}
