use std::process::{Command, Output};

use serde_json::Value;

fn slchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slchar"))
        .args(args)
        .env_remove("SLCHAR_PREC")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn coeffs_head() {
    let out = slchar(&["coeffs", "--ell", "3", "--s", "1", "--trunc", "10", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["coeffs"][0], "3");
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 10);
    assert_eq!(v["routes_agree"], true);
}

#[test]
fn char_head_starts_at_weight() {
    let out = slchar(&["char", "--ell", "2", "--s", "0", "--trunc", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["coeffs"][0], "1");
    assert_eq!(v["central_charge"], -3);
}

#[test]
fn asym_csv_rows() {
    let out = slchar(&[
        "--format", "csv", "asym", "--ell", "3", "--s", "0", "--t", "0.1,0.05", "--N", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,exact,expansion,abs_err");
    assert_eq!(lines.len(), 3);
    let err: f64 = lines[2].split(',').nth(3).unwrap().parse().unwrap();
    let exact: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!(err / exact < 1e-7);
}

#[test]
fn appendix_passes() {
    let out = slchar(&["verify-appendix", "--ell-max", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(slchar(&["coeffs", "--ell", "1", "--s", "0"]).status.code(), Some(2));
    assert_eq!(
        slchar(&["coeffs", "--ell", "3", "--s", "0", "--trunc", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(slchar(&["coeffs", "--bogus"]).status.code(), Some(2));
    assert_eq!(slchar(&["asym", "--ell", "4", "--s", "0"]).status.code(), Some(2));
    assert_eq!(
        slchar(&["qdim", "--ell", "3", "--s", "1", "--t", "0.1,-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(slchar(&["verify-modular", "--tol", "1e-60"]).status.code(), Some(2));
    assert_eq!(
        slchar(&["verify-modular", "--family", "general", "--matrix", "1,0,0,1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn failed_check_exits_1_with_report() {
    let out = slchar(&["verify-em", "--N", "1", "--slack", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["pass"] == false));
}

#[test]
fn seeded_output_is_bit_identical() {
    let args = [
        "verify-modular",
        "--family",
        "half-index",
        "--points",
        "2",
        "--tol",
        "1e-25",
    ];
    let a = slchar(&args);
    let b = slchar(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut other = args.to_vec();
    other.extend(["--seed", "5"]);
    assert_ne!(slchar(&other).stdout, a.stdout);
}

#[test]
fn explicit_point_transform() {
    let out = slchar(&[
        "verify-modular",
        "--family",
        "general",
        "--matrix",
        "1,0,1,1",
        "--z",
        "0.1,-0.2",
        "--tau",
        "0.1,1",
        "--tol",
        "1e-12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["checks"].as_array().unwrap().len(), 1);
}

#[test]
fn precision_from_environment() {
    let run = |prec: &str| {
        Command::new(env!("CARGO_BIN_EXE_slchar"))
            .args(["verify-decomposition", "--ell", "2", "--points", "1", "--s-max", "0"])
            .env("SLCHAR_PREC", prec)
            .output()
            .unwrap()
    };
    assert_eq!(run("64").status.code(), Some(2));
    assert_eq!(run("128").status.code(), Some(0));
}
