//! End-to-end tests of the binary: exit codes, report determinism, the
//! twist pipeline, and negative controls on corrupted inputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn baxter() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_baxter"));
    // Keep the seed resolution independent of the surrounding shell.
    cmd.env_remove("BAXTER_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    baxter().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("write input file");
    path
}

fn trig_spec(dir: &Path) -> PathBuf {
    write_file(dir, "trig.json", r#"{"N": 2, "kind": "trig"}"#)
}

fn rational_spec(dir: &Path) -> PathBuf {
    write_file(dir, "rational.json", r#"{"N": 2, "kind": "rational"}"#)
}

fn twist_spec(dir: &Path) -> PathBuf {
    write_file(
        dir,
        "tw.json",
        r#"{"phi": [[1, 2, "3/2"]], "v1": ["1", "2"], "v2": ["1", "3"]}"#,
    )
}

#[test]
fn builder_passes_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let r = trig_spec(dir.path());
    let out = run(&["verify-ybe", "--r", r.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["command"], "verify-ybe");
    assert_eq!(report["status"], "pass");
    // Dimension 2 defaults to full expansion, seed still recorded.
    assert_eq!(report["mode"], "expand");
    assert_eq!(report["seed"], 0);
}

#[test]
fn identical_spec_and_seed_give_byte_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let r = rational_spec(dir.path());
    let args = [
        "verify-ybe",
        "--r",
        r.to_str().unwrap(),
        "--mode",
        "sample",
        "--samples",
        "6",
        "--seed",
        "5",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn seed_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let r = trig_spec(dir.path());
    let out = baxter()
        .args(["verify-ybe", "--r", r.to_str().unwrap(), "--mode", "sample", "--samples", "3"])
        .env("BAXTER_SEED", "42")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["seed"], 42);
}

#[test]
fn twist_output_pipes_into_the_verifiers() {
    let dir = tempfile::tempdir().unwrap();
    let r = rational_spec(dir.path());
    let tw = twist_spec(dir.path());
    let coloured = dir.path().join("coloured.json");
    let out = run(&[
        "twist",
        "--r",
        r.to_str().unwrap(),
        "--tw",
        tw.to_str().unwrap(),
        "--out",
        coloured.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    // The emitted file is a two-colour table set that still solves the
    // exchange identity.
    let ybe = run(&[
        "verify-ybe",
        "--r",
        coloured.to_str().unwrap(),
        "--mode",
        "sample",
        "--samples",
        "8",
        "--seed",
        "11",
    ]);
    assert!(ybe.status.success(), "{}", String::from_utf8_lossy(&ybe.stdout));

    // The constraint checker collapses the colour pair and still passes.
    let constraints = run(&[
        "verify-constraints",
        "--r",
        coloured.to_str().unwrap(),
        "--mode",
        "sample",
        "--samples",
        "6",
        "--seed",
        "11",
    ]);
    assert!(constraints.status.success());
    assert_eq!(stdout_json(&constraints)["inputs"]["collapsed"], true);

    // Relation generation consumes it as well.
    let rtt = run(&["gen-rtt", "--r", coloured.to_str().unwrap()]);
    assert!(rtt.status.success());
    assert!(!stdout_json(&rtt)["relations"].as_array().unwrap().is_empty());
}

#[test]
fn corrupted_table_fails_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    // Trig tables with one g entry replaced by an off value.
    let bad = write_file(
        dir.path(),
        "bad.json",
        r#"{"N": 2, "spectral": "none",
            "f": [[1, 1, "q"], [1, 2, "1"], [2, 1, "1"], [2, 2, "q"]],
            "g": [[1, 2, "q - 1/q"], [2, 1, "1/7"]]}"#,
    );
    let out = run(&["verify-ybe", "--r", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "fail");
    let failing: Vec<&Value> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .collect();
    assert!(!failing.is_empty());
    assert!(
        failing.iter().any(|c| c.get("witness").is_some()),
        "failures must point at a residual entry"
    );
}

#[test]
fn matching_presentation_passes_and_a_perturbed_one_fails() {
    let dir = tempfile::tempdir().unwrap();
    let r = trig_spec(dir.path());

    let good = run(&["gen-rtt", "--r", r.to_str().unwrap(), "--check-against", "gl"]);
    assert!(good.status.success(), "{}", String::from_utf8_lossy(&good.stdout));

    // Serialize the matching presentation, then damage one rewrite
    // coefficient and expect the equivalence proof to fail.
    let presentation = baxter::algebra::gl_presentation(2).unwrap();
    let mut value = serde_json::to_value(&presentation).unwrap();
    let rules = value["rules"].as_array_mut().unwrap();
    let rule = rules
        .iter_mut()
        .find(|rule| !rule[1].as_array().unwrap().is_empty())
        .expect("some rule has a right-hand side");
    rule[1][0][0] = json!("17/5");
    let bad = write_file(
        dir.path(),
        "bad_presentation.json",
        &serde_json::to_string(&value).unwrap(),
    );
    let out = run(&[
        "gen-rtt",
        "--r",
        r.to_str().unwrap(),
        "--check-against",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["status"], "fail");
}

#[test]
fn unknown_family_and_missing_file_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let r = trig_spec(dir.path());
    let out = run(&[
        "gen-rtt",
        "--r",
        r.to_str().unwrap(),
        "--check-against",
        "not-a-family",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not-a-family"));

    let missing = run(&["verify-ybe", "--r", "no-such-file.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn report_writes_to_the_output_path_as_well() {
    let dir = tempfile::tempdir().unwrap();
    let r = trig_spec(dir.path());
    let report_path = dir.path().join("report.json");
    let out = run(&[
        "verify-ybe",
        "--r",
        r.to_str().unwrap(),
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let on_disk = std::fs::read(&report_path).unwrap();
    assert_eq!(on_disk, out.stdout);
}

#[test]
fn permutation_report_runs_from_a_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let phi = write_file(
        dir.path(),
        "phi.json",
        r#"[[1, 1, "1"], [1, 2, "5/3"], [2, 1, "3/5"], [2, 2, "-1"]]"#,
    );
    let out = run(&[
        "check-permutation",
        "--N",
        "2",
        "--M",
        "3",
        "--phi",
        phi.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let report = stdout_json(&out);
    assert_eq!(report["command"], "check-permutation");
    assert_eq!(report["inputs"]["N"], 2);
}
