use std::process::{Command, Output};

use serde_json::Value;

fn qrenorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrenorm")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|c| c.as_i64().unwrap()).collect()
}

#[test]
fn expand_sigma_head() {
    let out = qrenorm(&["expand", "SIGMA", "--bound", "10"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(ints(&v["coefficients"])[..5], [1, 1, -1, 2, -2]);
}

#[test]
fn expand_w_head() {
    let v = json(&qrenorm(&["expand", "W", "--bound", "5"]));
    assert_eq!(ints(&v["coefficients"]), [0, -2, 0, -2, 2]);
}

#[test]
fn expand_bound_zero_is_empty() {
    let out = qrenorm(&["expand", "SIGMA", "--bound", "0"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["coefficients"].as_array().unwrap().is_empty());
}

#[test]
fn expand_unknown_series_is_usage_error() {
    assert_eq!(code(&qrenorm(&["expand", "NOT_A_SERIES"])), 2);
    assert_eq!(code(&qrenorm(&["expand", "W", "--bound", "-3"])), 2);
}

#[test]
fn expand_csv_lists_nonzero_terms() {
    let out = qrenorm(&["expand", "W", "--bound", "5", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "exponent_num,exponent_den,num,den\n1,1,-2,1\n3,1,-2,1\n4,1,2,1\n");
}

#[test]
fn coeff_oracles() {
    for (args, want) in [
        (["coeff", "sigma", "1609"], 6),
        (["coeff", "tw", "7"], -2),
        (["coeff", "sigma", "0"], 1),
        (["coeff", "sigma_star", "70"], -4),
        (["coeff", "tw", "-7"], -2),
    ] {
        let out = qrenorm(&args);
        assert_eq!(code(&out), 0, "{args:?}");
        assert_eq!(json(&out)["value"], want, "{args:?}");
    }
}

#[test]
fn coeff_invalid_index_is_usage_error() {
    for args in [["coeff", "sigma", "-1"], ["coeff", "sigma_star", "0"], ["coeff", "ideal", "0"], ["coeff", "tw", "-3"]] {
        assert_eq!(code(&qrenorm(&args)), 2, "{args:?}");
    }
}

#[test]
fn coeff_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let first = qrenorm(&["coeff", "sigma", "1609", "--cache", cache]);
    let second = qrenorm(&["coeff", "sigma", "1609", "--cache", cache]);
    assert_eq!(first.stdout, second.stdout);
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
}

#[test]
fn verify_all_trivial_bound_passes() {
    let out = qrenorm(&["verify", "all", "--bound", "1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 30);
}

#[test]
fn verify_reports_are_deterministic_across_parallelism() {
    let a = qrenorm(&["verify", "identities", "--bound", "40", "--parallelism", "1"]);
    let b = qrenorm(&["verify", "identities", "--bound", "40", "--parallelism", "4"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "default_bound = 4\noutput_format = csv\n").unwrap();
    let p = path.to_str().unwrap();
    let out = qrenorm(&["expand", "W", "--config", p]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("exponent_num"));
    let v = json(&qrenorm(&["expand", "W", "--config", p, "--format", "json"]));
    assert_eq!(v["bound"], 4);
    std::fs::write(&path, "precision_digits = 10\n").unwrap();
    assert_eq!(code(&qrenorm(&["expand", "W", "--config", p])), 2);
    assert_eq!(code(&qrenorm(&["expand", "W", "--precision", "14"])), 2);
}

#[test]
fn maass_checks() {
    let v = json(&qrenorm(&["maass", "s-transform", "--x", "0.3", "--y", "0.8"]));
    assert!(v["max_residual"].as_f64().unwrap() < 1e-8);
    let v = json(&qrenorm(&["maass", "laplacian", "--x", "0.1", "--y", "1.0", "--h", "1e-3"]));
    assert!(v["max_residual"].as_f64().unwrap() < 1e-4);
    let v = json(&qrenorm(&["maass", "translate", "--x", "-0.7", "--y", "0.5"]));
    assert!(v["max_residual"].as_f64().unwrap() < 1e-13);
    let out = qrenorm(&["maass", "period", "--x", "0.1", "--y", "1.2", "--waveform", "sigma"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn maass_tail_too_large_fails() {
    let out = qrenorm(&["maass", "s-transform", "--x", "0.3", "--y", "0.2", "--n-max", "16"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds accuracy target"));
}

#[test]
fn quantum_sigma_cohen() {
    let out = qrenorm(&["quantum", "sigma-cohen", "--x", "1/5"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn quantum_fw_hole_exits_3() {
    let out = qrenorm(&["quantum", "fw", "--x", "1/2"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("DomainHole: x in S_1/2"));
}

#[test]
fn quantum_fw_finite_value() {
    let out = qrenorm(&["quantum", "fw", "--x", "1/4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["cusp_class"], "S_INF");
    let re: f64 = v["value"]["re"].as_str().unwrap().parse().unwrap();
    let im: f64 = v["value"]["im"].as_str().unwrap().parse().unwrap();
    assert!((re - 0.785694958387102).abs() < 1e-12 && (im + 1.175875602419359).abs() < 1e-12);
}

#[test]
fn quantum_period_sample_csv() {
    let out = qrenorm(&["quantum", "period-sample", "--gamma", "B", "--xs", "2/7,4/13"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x_num,x_den,re_h,im_h");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("2,7,6.6384296015"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&qrenorm(&["frobnicate"])), 2);
    assert_eq!(code(&qrenorm(&["quantum", "fw", "--x", "1/0"])), 2);
    assert_eq!(code(&qrenorm(&["maass", "laplacian", "--x", "0", "--y", "0.5", "--h", "0.7"])), 2);
}
