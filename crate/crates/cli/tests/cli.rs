//! End-to-end checks of the binary: exit codes, determinism of report
//! bodies, and the side files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn rauzy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rauzy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("rauzy-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn body_of(stdout: &[u8]) -> serde_json::Value {
    let doc: serde_json::Value = serde_json::from_slice(stdout).expect("valid JSON report");
    assert_eq!(doc["schema_version"], 1);
    doc["body"].clone()
}

#[test]
fn sweep_reports_exact_companions_and_passes_certificate() {
    let out = rauzy(&["sweep", "--n", "4"]);
    assert!(out.status.success(), "exit: {:?}", out.status);
    let body = body_of(&out.stdout);
    assert_eq!(body["config"]["command"], "sweep");
    assert_eq!(body["sweep"]["word_count"], 78);
    assert_eq!(body["sweep"]["expansion_certificate"], true);
    // Exact companions present: numerator/denominator digit strings.
    assert!(body["sweep"]["exp2a"]["num"].is_string());
    assert!(body["bound_full"]["s0"].is_string());
}

#[test]
fn report_bodies_are_byte_identical_across_runs() {
    for args in [
        vec!["sweep", "--n", "5", "--workers", "2"],
        vec!["prune", "--n", "5", "--eval", "grid:2", "--workers", "2"],
    ] {
        let first = rauzy(&args);
        let second = rauzy(&args);
        assert!(first.status.success());
        let a = serde_json::to_string(&body_of(&first.stdout)).unwrap();
        let b = serde_json::to_string(&body_of(&second.stdout)).unwrap();
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn prune_writes_side_files() {
    let trace = tmp("trace.csv");
    let retained = tmp("retained.txt");
    let table = tmp("words.csv");
    let out = rauzy(&[
        "prune",
        "--n",
        "4",
        "--eval",
        "vertices",
        "--trace",
        trace.to_str().unwrap(),
        "--retained",
        retained.to_str().unwrap(),
        "--per-word-table",
        table.to_str().unwrap(),
        "--out",
        tmp("prune-report.json").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let trace_text = std::fs::read_to_string(&trace).unwrap();
    assert!(trace_text.starts_with("# schema_version=1\nround,"));

    let words = std::fs::read_to_string(&retained).unwrap();
    let count = words.lines().count() as u64;
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp("prune-report.json")).unwrap()).unwrap();
    assert_eq!(report["body"]["prune"]["retained_count"], count);

    let table_text = std::fs::read_to_string(&table).unwrap();
    assert_eq!(table_text.lines().count(), 2 + 78);
}

#[test]
fn verify_small_run_passes_and_is_deterministic() {
    // Short words have no interior-vs-vertex violations at this sample
    // size; the run must succeed and reproduce byte-identically.
    let args = ["verify", "--n", "3", "--words", "8", "--points", "64", "--seed", "5"];
    let first = rauzy(&args);
    assert!(
        first.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&first.stderr)
    );
    let second = rauzy(&args);
    let a = serde_json::to_string(&body_of(&first.stdout)).unwrap();
    let b = serde_json::to_string(&body_of(&second.stdout)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn oracle_matches_for_small_lengths() {
    let out = rauzy(&["oracle", "--n", "2"]);
    assert!(out.status.success());
    let body = body_of(&out.stdout);
    assert_eq!(body["pass"], true);
    assert_eq!(body["words"], 6);
}

#[test]
fn configuration_errors_exit_with_code_2() {
    for args in [
        vec!["sweep", "--n", "1"],
        vec!["sweep", "--eval", "nonsense"],
        vec!["sweep", "--mode", "quantum"],
        vec!["prune", "--n", "4", "--mode", "float"],
        vec!["prune", "--n", "4", "--tie-break", "coin-flip"],
        vec!["oracle", "--n", "9"],
        vec!["render", "--depth", "0", "--out", "/tmp/x.pgm"],
        vec!["render", "--width", "8", "--out", "/tmp/x.pgm"],
    ] {
        let out = rauzy(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn render_is_byte_deterministic_and_versioned() {
    let p1 = tmp("g1.pgm");
    let p2 = tmp("g2.pgm");
    for p in [&p1, &p2] {
        let out = rauzy(&["render", "--depth", "2", "--width", "96", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let a = std::fs::read(&p1).unwrap();
    let b = std::fs::read(&p2).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with(b"P5\n# schema_version 1\n"));

    let png = tmp("g.png");
    let out = rauzy(&["render", "--depth", "2", "--width", "96", "--out", png.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(std::fs::read(&png).unwrap().starts_with(&[0x89, b'P', b'N', b'G']));
}

#[test]
fn float_mode_reports_same_extremal_words_as_exact() {
    let exact = rauzy(&["sweep", "--n", "5", "--mode", "exact"]);
    let float = rauzy(&["sweep", "--n", "5", "--mode", "float"]);
    assert!(exact.status.success() && float.status.success());
    let be = body_of(&exact.stdout);
    let bf = body_of(&float.stdout);
    for key in ["arg_exp2a", "arg_exp2b", "arg_expansion"] {
        assert_eq!(be["sweep"][key], bf["sweep"][key], "{key}");
    }
    assert_eq!(be["sweep"]["exp2a"], bf["sweep"]["exp2a"]);
}
