//! Command-line behavior: exit codes, diagnostics, and output plumbing.

use std::process::Command;

const CANONICAL: &str = include_str!("../../../samples/sum.f");

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mpiflow"))
}

fn canonical_file(dir: &tempfile::TempDir) -> std::path::PathBuf {
    let path = dir.path().join("sum.f");
    std::fs::write(&path, CANONICAL).unwrap();
    path
}

#[test]
fn missing_file_exits_1_and_names_the_file() {
    let out = bin().args(["analyze", "no-such-file.f"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("no-such-file.f"), "{stderr}");
    assert!(stderr.contains("error"), "{stderr}");
}

#[test]
fn usage_errors_exit_2() {
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["analyze", "x.f", "--format", "yaml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn annotate_prints_numbered_listing() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("annotate")
        .arg(canonical_file(&dir))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().count(), CANONICAL.lines().count());
    assert!(stdout.lines().last().unwrap().starts_with("23  33  "));
}

#[test]
fn cfg_writes_dot_to_stdout_or_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = canonical_file(&dir);

    let out = bin().arg("cfg").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("digraph mpicfg"));
    assert!(stdout.contains("b12 -> b3"));

    let dot_path = dir.path().join("graph.dot");
    let out = bin()
        .arg("cfg")
        .arg(&file)
        .arg("--out")
        .arg(&dot_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&dot_path).unwrap(), stdout);
}

#[test]
fn analyze_json_is_valid_and_stable_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let file = canonical_file(&dir);
    let run = || {
        let out = bin()
            .args(["analyze", "--format", "json"])
            .arg(&file)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let first = run();
    assert_eq!(first, run(), "JSON output differs between runs");
    let value: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(value["schema"], 1);
    assert_eq!(value["summary"]["blocks"], 23);
    assert_eq!(value["sync"].as_array().unwrap().len(), 8);
}

#[test]
fn analyze_text_hides_bookkeeping_unless_asked() {
    let dir = tempfile::tempdir().unwrap();
    let file = canonical_file(&dir);
    let out = bin().arg("analyze").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("MYID@7"));

    let out = bin()
        .args(["analyze", "--show-mpi-vars"])
        .arg(&file)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("MYID@7"));
}

#[test]
fn analyze_reports_unmatched_warnings_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pinned.f");
    std::fs::write(&path, CANONICAL.replace("MPI_ANY_TAG", "1")).unwrap();
    let out = bin().arg("analyze").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("warning: unmatched send"), "{stderr}");
}
