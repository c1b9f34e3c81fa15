use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orthologic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_slice(&run(&all).stdout).expect("valid JSON")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn f(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

#[test]
fn check_exit_codes() {
    assert_eq!(code(&run(&["check", &f("spin_half.lat")])), 0);
    assert_eq!(code(&run(&["check", &f("spin_half.model")])), 0);
    assert_eq!(code(&run(&["check", &f("boolean3.lat")])), 0);
    assert_eq!(code(&run(&["check", &f("o6.lat")])), 1);
    assert_eq!(
        code(&run(&[
            "check",
            &f("spin_half.lat"),
            "--require",
            "distributive"
        ])),
        1
    );
    assert_eq!(
        code(&run(&[
            "check",
            &f("boolean3.lat"),
            "--require",
            "distributive,modular"
        ])),
        0
    );
    assert_eq!(code(&run(&["report", &f("o6.lat")])), 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["check", &f("missing.lat")])), 2);
    assert_eq!(
        code(&run(&["check", &f("spin_half.lat"), "--tolerance", "0"])),
        2
    );
    assert_eq!(
        code(&run(&["check", &f("spin_half.lat"), "--tolerance", "-1"])),
        2
    );
    assert_eq!(
        code(&run(&["check", &f("spin_half.lat"), "--jobs", "0"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "check",
            &f("spin_half.lat"),
            "--require",
            "nonsense"
        ])),
        2
    );
    assert_eq!(
        code(&run(&["check", &f("spin_half.lat"), "--format", "dot"])),
        2
    );
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn malformed_input_reports_position() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.lat",
        "lattice bad\nelements: 0 p q I\norder: 0<p<I 0<q<I\ncomplement: p-q\n",
    );
    let out = run(&["check", &bad]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4, column 13"), "{err}");
}

#[test]
fn embed_exit_codes() {
    let dir = TempDir::new().unwrap();
    let lat = &f("spin_half.lat");
    assert_eq!(code(&run(&["embed", lat, &f("spin_half.assign")])), 0);
    assert_eq!(code(&run(&["embed", &f("mo3.model"), &f("mo3.assign")])), 0);
    let missing = write(
        &dir,
        "missing.assign",
        "dim: 2\nassign p: 1 0\nassign q: 0 1\nassign r: 1 1\n",
    );
    assert_eq!(code(&run(&["embed", lat, &missing])), 2);
    let collapsed = write(
        &dir,
        "collapsed.assign",
        "dim: 2\nassign p: 1 0\nassign q: 0 1\nassign r: 1 0\nassign s: 0 1\n",
    );
    let out = run(&["embed", lat, &collapsed]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
    let report = json(&["embed", lat, &collapsed, "--witnesses", "all"]);
    assert_eq!(report["report"]["verdict"], "fail");
    assert!(report["report"]["witnesses"].as_array().unwrap().len() > 1);
}

#[test]
fn json_documents_carry_schema() {
    for args in [
        vec!["check", "spin_half.lat"],
        vec!["report", "o6.lat"],
        vec!["model", "spin_half.model"],
        vec!["hasse", "spin_half.lat"],
        vec!["embed", "spin_half.lat", "spin_half.assign"],
    ] {
        let paths: Vec<String> = args[1..].iter().map(|a| f(a)).collect();
        let mut all = vec![args[0]];
        all.extend(paths.iter().map(String::as_str));
        let doc = json(&all);
        assert_eq!(doc["schema"], 1, "{args:?}");
        assert_eq!(doc["command"], args[0]);
    }
}

#[test]
fn check_json_reports_distributive_witness() {
    let doc = json(&["check", &f("spin_half.lat")]);
    assert_eq!(doc["ok"], true);
    assert_eq!(doc["report"]["classification"], "modular-ortholattice");
    let reports = doc["report"]["reports"].as_array().unwrap();
    let dist = reports
        .iter()
        .find(|r| r["property"] == "distributive")
        .unwrap();
    assert_eq!(dist["verdict"], "fail");
    let w = &dist["witnesses"][0];
    assert_eq!(w["elements"], serde_json::json!(["p", "r", "s"]));
    assert_eq!(
        (w["lhs"].as_str(), w["rhs"].as_str()),
        (Some("p"), Some("0"))
    );
}

#[test]
fn hasse_counts() {
    let dir = TempDir::new().unwrap();
    let two = write(
        &dir,
        "two.lat",
        "lattice two\nelements: 0 I\norder: 0<I\ncomplement:\n",
    );
    for (path, nodes, edges) in [
        (f("spin_half.lat"), 6, 8),
        (two, 2, 1),
        (f("boolean3.lat"), 8, 12),
    ] {
        let dot = stdout(&run(&["hasse", &path]));
        assert!(dot.starts_with("digraph"));
        assert_eq!(
            dot.lines().filter(|l| l.contains("->")).count(),
            edges,
            "{path}"
        );
        let node_lines = dot
            .lines()
            .filter(|l| l.trim_start().starts_with('"') && !l.contains("->"))
            .count();
        assert_eq!(node_lines, nodes, "{path}");
        let doc = json(&["hasse", &path]);
        assert_eq!(doc["lattice"]["elements"].as_array().unwrap().len(), nodes);
        assert_eq!(doc["lattice"]["covers"].as_array().unwrap().len(), edges);
    }
}

#[test]
fn model_output_matches_hand_written_lattice() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("compiled.lat");
    let out = run(&[
        "model",
        &f("spin_half.model"),
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("# set-level distributivity check:"));
    assert!(text.contains("{} ≠ P+"));
    let renamed = fs::read_to_string(&out_path)
        .unwrap()
        .replace("X.{+}", "p")
        .replace("X.{-}", "q")
        .replace("Y.{+}", "r")
        .replace("Y.{-}", "s");
    let renamed_path = write(&dir, "renamed.lat", &renamed);
    let shape = |path: &str| {
        let doc = json(&["hasse", path]);
        let mut covers = doc["lattice"]["covers"].as_array().unwrap().clone();
        covers.sort_by_key(|c| c.to_string());
        (
            doc["lattice"]["elements"].clone(),
            covers,
            doc["lattice"]["complements"].clone(),
        )
    };
    assert_eq!(shape(&renamed_path), shape(&f("spin_half.lat")));
    let compiled = json(&["check", out_path.to_str().unwrap()]);
    let direct = json(&["check", &f("spin_half.lat")]);
    assert_eq!(
        compiled["report"]["classification"],
        direct["report"]["classification"]
    );
}

#[test]
fn single_experiment_model_is_classical() {
    let out = stdout(&run(&["model", &f("classical.model")]));
    assert!(out.contains("# classical: distributive"), "{out}");
    let doc = json(&["model", &f("classical.model")]);
    assert!(doc["set_inequality"].is_null());
}

#[test]
fn mo3_model_has_eight_elements() {
    let doc = json(&["model", &f("mo3.model")]);
    assert_eq!(doc["lattice"]["elements"].as_array().unwrap().len(), 8);
    // every event of every experiment: 0, +, - and the full outcome set
    assert_eq!(doc["classes"].as_array().unwrap().len(), 3 * 4);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec![
            "check".to_string(),
            f("o6.lat"),
            "--witnesses".into(),
            "all".into(),
            "--jobs".into(),
            "3".into(),
        ],
        vec![
            "model".to_string(),
            f("mo3.model"),
            "--format".into(),
            "json".into(),
        ],
        vec!["hasse".to_string(), f("boolean3.lat")],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&args).stdout, run(&args).stdout, "{args:?}");
    }
    let serial = run(&["check", &f("o6.lat"), "--witnesses", "all"]);
    let parallel = run(&["check", &f("o6.lat"), "--witnesses", "all", "--jobs", "4"]);
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn n5_skips_ortho_checks() {
    let doc = json(&["report", &f("n5.lat")]);
    let reports = doc["report"]["reports"].as_array().unwrap();
    let verdict = |p: &str| reports.iter().find(|r| r["property"] == p).unwrap()["verdict"].clone();
    assert_eq!(verdict("orthomodular"), "skipped");
    assert_eq!(verdict("modular"), "fail");
}
