//! Golden-file regression and CLI contract tests: byte-identical output,
//! documented exit codes, and file output.

use std::path::Path;
use std::process::{Command, Output};

fn xld(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xld"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn golden_files_are_current() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let output = xld(&["golden", "--dir", dir.to_str().unwrap()]);
    assert!(
        output.status.success(),
        "golden check failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn identical_inputs_give_byte_identical_output() {
    for args in [
        ["ih", "3", "4"].as_slice(),
        ["diamond", "--xld", "2", "4"].as_slice(),
        ["lattice", "2", "3", "--degree", "5", "--points"].as_slice(),
        ["stability", "t1", "3", "3"].as_slice(),
        ["kvol", "delta", "4", "2"].as_slice(),
    ] {
        let first = xld(args);
        let second = xld(args);
        assert!(first.status.success(), "args: {args:?}");
        assert_eq!(first.stdout, second.stdout, "args: {args:?}");
    }
}

#[test]
fn exit_codes_are_documented() {
    // 2: invalid parameters
    let output = xld(&["diamond", "--xld", "0", "3"]);
    assert_eq!(output.status.code(), Some(2));
    let output = xld(&["diamond"]);
    assert_eq!(output.status.code(), Some(2));
    // clap-level parse failures also use 2
    let output = xld(&["no-such-command"]);
    assert_eq!(output.status.code(), Some(2));
    // 4: enumeration cap exceeded
    let output = xld(&["lattice", "2", "3", "--degree", "12", "--cap", "10"]);
    assert_eq!(output.status.code(), Some(4));
}

#[test]
fn cap_env_variable_is_honored() {
    let output = Command::new(env!("CARGO_BIN_EXE_xld"))
        .args(["lattice", "2", "3", "--degree", "12"])
        .env("XLD_ENUM_CAP", "10")
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(4));
    // an explicit flag overrides the environment
    let output = Command::new(env!("CARGO_BIN_EXE_xld"))
        .args(["lattice", "2", "3", "--degree", "12", "--cap", "100000"])
        .env("XLD_ENUM_CAP", "10")
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn output_flag_writes_files() {
    let dir = std::env::temp_dir().join(format!("xld-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ih.json");
    let output = xld(&["ih", "2", "3", "--output", path.to_str().unwrap()]);
    assert!(output.status.success());
    assert!(output.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("\"coefficients\":[1,5,6,5,1]"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn csv_and_pretty_formats_render() {
    let output = xld(&["ih", "2", "3", "--format", "csv"]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.starts_with("i,dim_ih_2i"));

    let output = xld(&["diamond", "--xld", "2", "2", "--format", "pretty"]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let rows: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(rows, vec!["1", "0 0", "0 2 0", "0 0", "1"]);
}

#[test]
fn points_stream_precedes_summary() {
    let output = xld(&["lattice", "2", "2", "--degree", "1", "--points"]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5); // 4 points + summary
    for line in &lines[..4] {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["deg"], 1);
    }
    let summary: serde_json::Value = serde_json::from_str(lines[4]).unwrap();
    assert_eq!(summary["count"], 4);
}
