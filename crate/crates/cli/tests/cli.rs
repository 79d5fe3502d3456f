use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fiq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fiq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p
}

/// Runs a subcommand from a config file into `dir/<out>`.
fn run_config(dir: &Path, cmd: &str, config: &Path, out: &str, extra: &[&str]) -> PathBuf {
    let out_dir = dir.join(out);
    let mut args = vec![cmd, "--config", config.to_str().unwrap(), "--out", out_dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = fiq(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    out_dir
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap()
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&read(p)).unwrap()
}

/// Data rows of a stamped CSV payload.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(2)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn info_prints_information() {
    let o = fiq(&["info", "101*"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("I = 3\n"), "{}", stdout(&o));

    let o = fiq(&["info", "?(1/4)*", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["information"].as_f64().unwrap() - 0.188_721_875_540_867).abs() < 1e-12);
    assert_eq!(v["bits"][0]["propensity"], "1/4");
}

#[test]
fn info_reports_parse_column() {
    let o = fiq(&["info", "10?(3/2)*"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("column 5"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_with_validation_code() {
    assert_eq!(fiq(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(fiq(&["--help"]).status.code(), Some(0));
}

#[test]
fn unknown_config_fields_are_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"map": "doubling", "stpes": 5}"#);
    let o = fiq(&["evolve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("stpes"));
}

#[test]
fn evolve_is_reproducible_and_stamped() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"map": "doubling", "model": "fiq", "steps": 50}"#);
    let a = run_config(dir.path(), "evolve", &cfg, "a", &["--seed", "7"]);
    let b = run_config(dir.path(), "evolve", &cfg, "b", &["--seed", "7"]);
    for f in ["trajectory.csv", "manifest.json", "config.json"] {
        assert_eq!(read(&a.join(f)), read(&b.join(f)), "{f}");
    }
    let manifest = json(&a.join("manifest.json"));
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["model"], "fiq");
    let hash = manifest["config_sha256"].as_str().unwrap().to_string();
    assert_eq!(hash.len(), 64);
    assert!(read(&a.join("trajectory.csv")).starts_with(&format!("# config_sha256={hash} seed=7\n")));
    assert_eq!(json(&a.join("config.json"))["seed"], 7);
    assert!(read(&a.join("run.log")).contains("started_unix="));
}

#[test]
fn distinct_tapes_give_distinct_streams() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"map": "doubling", "model": "tape", "steps": 50}"#);
    let emitted = |seed: &str| {
        let out = run_config(dir.path(), "evolve", &cfg, seed, &["--seed", seed]);
        csv_rows(&read(&out.join("trajectory.csv")))
            .into_iter()
            .map(|r| r[1].clone())
            .collect::<String>()
    };
    assert_ne!(emitted("7"), emitted("8"));
}

#[test]
fn rotation_quarter_has_period_four() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"map": "rotation(1/4)", "steps": 8, "precision": 2}"#,
    );
    let out = run_config(dir.path(), "evolve", &cfg, "r", &[]);
    let rows = csv_rows(&read(&out.join("trajectory.csv")));
    assert_eq!(rows.len(), 8);
    for t in 0..4 {
        assert_eq!(rows[t][1], rows[t + 4][1]);
    }
    let distinct: std::collections::BTreeSet<_> = rows[..4].iter().map(|r| r[1].clone()).collect();
    assert_eq!(distinct.len(), 4);
}

#[test]
fn budget_exhaustion_exits_with_runtime_code() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"precision": 8, "budget": 1}"#);
    let o = fiq(&["evolve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("step 1"), "{}", stderr(&o));
}

#[test]
fn compare_default_is_indistinguishable() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", "{}");
    let out = run_config(dir.path(), "compare", &cfg, "c", &[]);
    let report = json(&out.join("report.json"));
    assert_eq!(report["verdict"], "indistinguishable at alpha=0.001");
    assert_eq!(report["equivalence"].as_array().unwrap().len(), 4);
    assert_eq!(report["battery"]["fiq"][0]["streams"], 200);
}

#[test]
fn compare_detects_injected_bias() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"ensemble": 50, "test_bias": "3/4"}"#);
    let out = run_config(dir.path(), "compare", &cfg, "c", &[]);
    assert_eq!(json(&out.join("report.json"))["verdict"], "distinguished");
}

#[test]
fn compare_rejects_small_ensembles() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"ensemble": 1}"#);
    let o = fiq(&["compare", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ensemble too small"));
}

#[test]
fn qmeasure_certain_outcomes() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"probabilities": ["1", "0"], "trials": 5}"#);
    let out = run_config(dir.path(), "qmeasure", &cfg, "q", &["--seed", "3"]);
    let rows = csv_rows(&read(&out.join("outcomes.csv")));
    assert_eq!(rows.len(), 10);
    for r in rows {
        assert_eq!(r[2], if r[1] == "1" { "1" } else { "-1" });
    }
}

#[test]
fn qmeasure_born_frequency() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"probabilities": ["3/10"], "trials": 100000}"#);
    let out = run_config(dir.path(), "qmeasure", &cfg, "q", &[]);
    let s = json(&out.join("summary.json"));
    let f = s["steps"][0]["frequency"].as_f64().unwrap();
    assert!((f - 0.3).abs() < 0.0058, "{f}");
    assert_eq!(s["steps"][0]["probability"], "3/10");
}

#[test]
fn qmeasure_from_state_and_projector() {
    let dir = TempDir::new().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let cfg = write_config(
        dir.path(),
        "c.json",
        &format!(
            r#"{{"probabilities": [], "trials": 2000,
                "measurements": [{{"state": [[{h}, 0], [0, {h}]],
                                   "projector": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}}]}}"#
        ),
    );
    let out = run_config(dir.path(), "qmeasure", &cfg, "q", &[]);
    let s = json(&out.join("summary.json"));
    assert_eq!(s["steps"][0]["verdict"], "pass");

    let bad = write_config(
        dir.path(),
        "bad.json",
        r#"{"probabilities": [], "measurements": [{"state": [[1, 0], [0, 0]],
            "projector": [[[0.5, 0], [0, 0]], [[0, 0], [0, 0]]]}]}"#,
    );
    let o = fiq(&["qmeasure", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("idempotent"), "{}", stderr(&o));
}

#[test]
fn diverge_doubling_is_exactly_k() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"ks": [5, 10, 20], "trials": 200}"#);
    let out = run_config(dir.path(), "diverge", &cfg, "d", &[]);
    for r in csv_rows(&read(&out.join("divergence.csv"))) {
        assert_eq!(r[0], r[2]);
    }
    let s = json(&out.join("summary.json"));
    for (i, k) in [5.0, 10.0, 20.0].iter().enumerate() {
        assert_eq!(s["per_k"][i]["mean"].as_f64().unwrap(), *k);
    }
}

#[test]
fn diverge_rotation_flags_censoring() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"map": "rotation(1/4)", "ks": [10], "trials": 50, "horizon": 10000}"#,
    );
    let out = run_config(dir.path(), "diverge", &cfg, "d", &[]);
    let rows = csv_rows(&read(&out.join("divergence.csv")));
    assert!(rows.iter().any(|r| r[2] == "censored"));
    assert!(json(&out.join("summary.json"))["per_k"][0]["censored"].as_u64().unwrap() > 0);
}
