use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn qes(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qes"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("exp.toml");
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn normal_order_reads_stdin() {
    let out = qes(&["normal-order"], Some("b-(1,0,0,0) b+(1,0,0,0)\n"));
    assert!(out.status.success());
    assert_eq!(text(&out.stdout).trim(), "(-1.0+0.0i)·b+(1,0,0,0) b-(1,0,0,0)");
    let out = qes(&["normal-order", "--mode", "wick"], Some("b-(1,0,0,0) b+(1,0,0,0)"));
    assert_eq!(text(&out.stdout).trim(), "(1.0+0.0i)·1 + (-1.0+0.0i)·b+(1,0,0,0) b-(1,0,0,0)");
    let out = qes(&["normal-order"], Some("b*(1,0,0,0)"));
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("parse error"));
}

#[test]
fn printed_config_is_a_valid_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = qes(&["print-config", "--seed", "9"], None);
    assert!(out.status.success());
    let printed = text(&out.stdout);
    assert!(printed.contains("seed = 9"));
    let path = write_config(dir.path(), &printed);
    let again = qes(&["print-config", "--config", &path], None);
    assert_eq!(text(&again.stdout), printed);
}

#[test]
fn experiment_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = qes(&["spread", "--out", out_dir.to_str().unwrap(), "--svg"], None);
    assert!(out.status.success(), "{}", text(&out.stdout));
    let stdout = text(&out.stdout);
    assert!(stdout.contains("PASS bad_vs_free"));
    assert!(stdout.contains("truncation:"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("spread.json")).unwrap()).unwrap();
    assert_eq!(json["experiment"], "spread");
    assert!(json["verdicts"].as_array().unwrap().iter().all(|v| v["passed"] == true));
    let csv = std::fs::read_to_string(out_dir.join("spread_spread.csv")).unwrap();
    assert!(csv.starts_with("t,free,full,bad\n"));
    assert!(out_dir.join("spread_spread.svg").exists());
    assert!(out_dir.join("spread.timing.json").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let o = dir.path().join(sub);
        assert!(qes(&["immunity", "--seed", "5", "--out", o.to_str().unwrap()], None).status.success());
        (std::fs::read(o.join("immunity.json")).unwrap(), std::fs::read(o.join("immunity_deviation.csv")).unwrap())
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn failing_verdict_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "[spread]\nmin_deviation = 1e9\n");
    let out = qes(&["spread", "--config", &path, "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stdout).contains("FAIL bad_vs_free"));
}

#[test]
fn bad_config_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "[model]\nflavour = 3\n");
    let out = qes(&["signs", "--config", &path], None);
    assert_eq!(out.status.code(), Some(2));
    let out = qes(&["signs", "--config", "/nonexistent/exp.toml"], None);
    assert_eq!(out.status.code(), Some(2));
}
