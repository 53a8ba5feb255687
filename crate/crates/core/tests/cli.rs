use std::path::Path;
use std::process::{Command, Output};

fn lpft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpft")).args(args).output().expect("run lpft")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).expect("golden file")
}

fn assert_golden(args: &[&str], name: &str) {
    let o = lpft(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), golden(name));
}

#[test]
fn golden_transform_of_gauss() {
    assert_golden(&["ft", "--fn", "gauss", "--ys", "-1,0,1"], "ft_gauss.csv");
}

#[test]
fn golden_transform_of_triangle_expression() {
    assert_golden(&["ft", "--fn", "piecewise(-1,1; 0; 1-abs(x); 0)", "--ys", "0,0.5"], "ft_triangle.csv");
}

#[test]
fn golden_laplace_derivative() {
    assert_golden(&["ld", "--fn", "gauss", "--xs", "0.5,0"], "ld_gauss.csv");
}

#[test]
fn golden_convolution() {
    assert_golden(&["conv", "--fn", "box", "--g", "box", "--xs", "0,0.5,1"], "conv_box_box.csv");
}

#[test]
fn golden_inversion() {
    assert_golden(&["invert", "--fn", "gauss", "--xs", "0"], "invert_gauss.csv");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["ft", "--fn", "sinc_tail", "--ys", "0"][..],
        &["ld", "--fn", "bump", "--xs", "-0.5:0.5:5"],
        &["verify", "--suite", "convolution,fubini"],
    ] {
        let a = lpft(args);
        let b = lpft(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn exit_code_contract() {
    assert_eq!(lpft(&["ft", "--fn", "box", "--ys", "0"]).status.code(), Some(0));
    assert_eq!(lpft(&["ld", "--fn", "abs", "--xs", "0"]).status.code(), Some(1));
    assert_eq!(lpft(&["ft", "--fn", "nosuch", "--ys", "0"]).status.code(), Some(2));
    assert_eq!(lpft(&["ft", "--ys", "0"]).status.code(), Some(2));
    assert_eq!(lpft(&["ft", "--fn", "exp(", "--ys", "0"]).status.code(), Some(2));
    assert_eq!(lpft(&["ft", "--fn", "gauss", "--ys", "1:0:x"]).status.code(), Some(2));
    assert_eq!(lpft(&["bogus"]).status.code(), Some(2));
}

#[test]
fn oscillating_tail_off_zero_fails() {
    let o = lpft(&["ft", "--fn", "sinc_tail", "--ys", "0,0.3"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.lines().nth(2).unwrap().contains("hypothesis-violation"), "{out}");
}

#[test]
fn sides_disagree_is_reported() {
    let o = lpft(&["ld", "--fn", "abs", "--xs", "0"]);
    assert!(stdout(&o).contains("sides-disagree"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "fn = gauss\nys = 5,6\nformat = csv\n").unwrap();
    let o = lpft(&["ft", "--config", cfg.to_str().unwrap(), "--ys", "-1,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("ft_gauss.csv"));
}

#[test]
fn unreadable_or_malformed_config_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.cfg");
    assert_eq!(lpft(&["ft", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(lpft(&["ft", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("conv.csv");
    let o = lpft(&["conv", "--fn", "box", "--g", "box", "--xs", "0,0.5,1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap(), golden("conv_box_box.csv"));
}

#[test]
fn empty_suite_list_has_no_records() {
    let o = lpft(&["verify", "--suite", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn broken_hypothesis_probe_fails() {
    let o = lpft(&["verify", "--suite", "broken-hypothesis", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(",false,"));
}

#[test]
fn unknown_suite_is_a_parse_error() {
    assert_eq!(lpft(&["verify", "--suite", "nosuch"]).status.code(), Some(2));
}

#[test]
fn verify_jsonl_records() {
    let o = lpft(&["verify", "--suite", "convolution"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(!out.is_empty());
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("one JSON object per line");
        for key in ["identity_name", "fixture", "lhs", "rhs", "abs_residual", "pass"] {
            assert!(v.get(key).is_some(), "{key} missing in {line}");
        }
        assert_eq!(v["pass"], serde_json::Value::Bool(true), "{line}");
    }
}

#[test]
fn jsonl_transform_rows() {
    let o = lpft(&["ft", "--fn", "box", "--ys", "0", "--format", "jsonl"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "converged");
    assert!((v["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}
