//! Black-box CLI checks: exit codes, diagnostics, file handling.

use std::path::Path;
use std::process::{Command, Output};

use gtcodes_core::CodeMatrix;

fn gtcodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtcodes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write_matrix(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(gtcodes(&["--help"]).status.code(), Some(0));
    assert_eq!(gtcodes(&["--version"]).status.code(), Some(0));
    assert_eq!(gtcodes(&["verify", "--help"]).status.code(), Some(0));
}

#[test]
fn unknown_flags_and_bad_values_exit_64() {
    assert_eq!(gtcodes(&["bogus"]).status.code(), Some(64));
    assert_eq!(gtcodes(&["bound", "--mode", "nonsense"]).status.code(), Some(64));
    assert_eq!(gtcodes(&["bound", "--mode", "eval"]).status.code(), Some(64));
    assert_eq!(gtcodes(&["bound", "--mode", "eval", "--p", "0.3", "--alpha", "0.9"]).status.code(), Some(64));
}

#[test]
fn missing_file_exits_66() {
    let out = gtcodes(&["verify", "--matrix", "/definitely/not/here", "--d", "2", "--property", "uffd"]);
    assert_eq!(out.status.code(), Some(66));
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn malformed_matrix_reports_position_and_exits_66() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    write_matrix(&path, "2 4\n1021\n0110\n");
    let out = gtcodes(&["verify", "--matrix", path.to_str().unwrap(), "--d", "2", "--property", "uffd"]);
    assert_eq!(out.status.code(), Some(66));
    let err = stderr(&out);
    assert!(err.contains("line 2, column 3"), "diagnostic missing position: {err}");

    write_matrix(&path, "2 4\n10111\n0110\n");
    let out = gtcodes(&["decode", "--matrix", path.to_str().unwrap(), "--outcome", "11", "--d", "1", "--algo", "comp"]);
    assert_eq!(out.status.code(), Some(66));
    assert!(stderr(&out).contains("row has 5 characters, expected 4"));
}

#[test]
fn decode_exit_codes_follow_status() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    // identity 3 + a duplicate of column 1
    write_matrix(&path, "3 4\n1001\n0100\n0010\n");
    let p = path.to_str().unwrap();

    let ok = gtcodes(&["decode", "--matrix", p, "--outcome", "110", "--d", "2", "--algo", "uffd"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "1 2\n");

    let ambiguous = gtcodes(&["decode", "--matrix", p, "--outcome", "100", "--d", "1", "--algo", "brute"]);
    assert_eq!(ambiguous.status.code(), Some(2));
    assert_eq!(stdout(&ambiguous), "ambiguous\n");
    assert!(stderr(&ambiguous).contains("D1={1} D2={4}"));

    let inconsistent = gtcodes(&["decode", "--matrix", p, "--outcome", "011", "--d", "1", "--algo", "brute"]);
    assert_eq!(inconsistent.status.code(), Some(3));
    assert_eq!(stdout(&inconsistent), "inconsistent\n");

    let empty = gtcodes(&["decode", "--matrix", p, "--outcome", "000", "--d", "2", "--algo", "uffd"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(stdout(&empty), "\n");

    let wrong_len = gtcodes(&["decode", "--matrix", p, "--outcome", "0000", "--d", "2", "--algo", "uffd"]);
    assert_eq!(wrong_len.status.code(), Some(64));
}

#[test]
fn verify_prints_witness_and_exits_one_on_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    // two equal columns
    write_matrix(&path, "3 3\n110\n110\n001\n");
    let p = path.to_str().unwrap();

    let out = gtcodes(&["verify", "--matrix", p, "--d", "1", "--property", "union-free"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("holds=false"));
    assert!(text.contains("witness: D1={1} D2={2}"), "got: {text}");

    let all = gtcodes(&["verify", "--matrix", p, "--d", "2", "--property", "all"]);
    assert_eq!(all.status.code(), Some(1));
    let text = stdout(&all);
    assert!(text.contains("union-free=false"));

    // vacuous disjunctive is reported as such
    let vac = gtcodes(&["verify", "--matrix", p, "--d", "3", "--property", "disjunctive"]);
    assert_eq!(vac.status.code(), Some(0));
    assert!(stdout(&vac).contains("vacuous=true"));
}

#[test]
fn construct_writes_matrix_and_sidecar_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("code.txt");
    let p = out_path.to_str().unwrap();
    let out = gtcodes(&["construct", "--t", "40", "--p", "0.31", "--n", "16", "--seed", "7", "--out", p]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let text = std::fs::read_to_string(&out_path).unwrap();
    let matrix = CodeMatrix::from_text(&text).unwrap();
    assert_eq!(matrix.t(), 40);
    // re-save is byte-identical
    assert_eq!(matrix.to_text(), text);

    let report = std::fs::read_to_string(dir.path().join("code.txt.report")).unwrap();
    assert!(report.contains("n_final="));
    assert!(report.contains("rate="));
    assert_eq!(stdout(&out), report);

    // the emitted code verifies as 2-UFFD
    let verify = gtcodes(&["verify", "--matrix", p, "--d", "2", "--property", "uffd"]);
    assert_eq!(verify.status.code(), Some(0));
}

#[test]
fn construct_writes_nothing_on_invalid_params() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("code.txt");
    let out = gtcodes(&[
        "construct", "--t", "40", "--p", "1.5", "--n", "16", "--seed", "7",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(64));
    assert!(!out_path.exists());
    assert!(!dir.path().join("code.txt.report").exists());
}

#[test]
fn construct_exits_four_when_retries_exhausted() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("code.txt");
    // no 2-column matrix can pass the coverage bound
    let out = gtcodes(&[
        "construct", "--t", "8", "--p", "0.4", "--n", "2", "--seed", "1",
        "--max-retries", "3", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!out_path.exists());
}

#[test]
fn simulate_emits_one_line_per_trial_plus_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    write_matrix(&path, &CodeMatrix::identity(6).to_text());
    let out = gtcodes(&[
        "simulate", "--matrix", path.to_str().unwrap(), "--d", "2", "--algo", "comp",
        "--trials", "10", "--seed", "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert!(lines[0].starts_with("trial=0 "));
    assert!(lines[10].starts_with("trials=10 successes=10 success_rate=1"));
}
