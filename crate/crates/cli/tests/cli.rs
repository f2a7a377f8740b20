//! End-to-end CLI behavior: argument handling, exit codes, strict config
//! parsing, and the file interfaces.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_convexrelax"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("convexrelax-cli-{}-{}", std::process::id(), name));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn project_round_trips_feasible_point() {
    let dir = workdir("roundtrip");
    let body = write(
        &dir,
        "body.json",
        r#"{"variant":"euclidean_ball","radius":2.0,"ambient_dim":3}"#,
    );
    let point = write(&dir, "in.csv", "0.5\n-0.25\n1.0\n");
    let out = dir.join("out.csv");
    let status = bin()
        .args(["project", "--body"])
        .arg(&body)
        .arg("--point")
        .arg(&point)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "0.5\n-0.25\n1\n");
}

#[test]
fn project_writes_matrix_shape() {
    let dir = workdir("matrix");
    let body = write(&dir, "body.json", r#"{"variant":"elliptope","side":2}"#);
    let point = write(&dir, "in.csv", "1,0.5\n0.5,1\n");
    let out = dir.join("out.csv");
    let status = bin()
        .args(["project", "--body"])
        .arg(&body)
        .arg("--point")
        .arg(&point)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 2, "matrix output keeps its shape");
    assert!(text.lines().all(|l| l.split(',').count() == 2));
}

#[test]
fn bounds_prints_values() {
    let out = bin()
        .args([
            "bounds", "--which", "nuclear", "--r", "1", "--m1", "10", "--m2", "10",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "57");

    let out = bin()
        .args(["bounds", "--which", "cap-volume", "--p", "25", "--h", "0.4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let nums: Vec<f64> = text
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(nums.len(), 2);
    assert!((nums[1] / nums[0] - 5.0).abs() < 1e-12);
}

#[test]
fn domain_errors_exit_1() {
    // Bound evaluated outside its proved range.
    let out = bin()
        .args(["bounds", "--which", "volume", "--mu", "0.2", "--p", "100"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound inapplicable"));

    // Infeasible anchor in a complexity config.
    let dir = workdir("infeasible");
    let cfg = write(
        &dir,
        "cone.json",
        r#"{
            "mode": "approx",
            "body": {"variant": "euclidean_ball", "radius": 1.0, "ambient_dim": 2},
            "anchor": [5.0, 0.0],
            "draws": 10,
            "seed": 1
        }"#,
    );
    let out = bin()
        .arg("complexity")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("anchor"));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    // Unknown subcommand (clap).
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Unknown config key, named in the message.
    let dir = workdir("strict");
    let cfg = write(
        &dir,
        "risk.json",
        r#"{
            "signal": {"variant": "cut_matrices", "m": 2},
            "body": {"variant": "elliptope", "side": 2},
            "sigma": 1.0, "n": 2, "trials": 4, "seed": 3,
            "surprise": true
        }"#,
    );
    let out = bin()
        .arg("risk")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("surprise"));

    // Missing seed is a parse error: stochastic commands require it.
    let cfg = write(
        &dir,
        "noseed.json",
        r#"{
            "signal": {"variant": "cut_matrices", "m": 2},
            "body": {"variant": "elliptope", "side": 2},
            "sigma": 1.0, "n": 2, "trials": 4
        }"#,
    );
    let out = bin()
        .arg("risk")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));

    // Bad thread cap.
    let out = bin()
        .args(["bounds", "--which", "l1", "--s", "1", "--p", "2"])
        .env("CONVEXRELAX_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tradeoff_emits_exact_header_and_plot_data() {
    let dir = workdir("tradeoff");
    let cfg = write(
        &dir,
        "ex.json",
        r#"{
            "example": "cut",
            "m_grid": [3],
            "relaxations": ["hull", "nuclear"],
            "trials": 30,
            "seed": 5
        }"#,
    );
    let out_csv = dir.join("ex.csv");
    let plot_csv = dir.join("plot.csv");
    let status = bin()
        .arg("tradeoff")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out_csv)
        .arg("--plot-data")
        .arg(&plot_csv)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out_csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "example,relaxation,p,n_star,risk_hat,risk_se,agg_ops,proj_ops,wall_ms,seed"
    );
    assert_eq!(text.lines().count(), 3);

    // plot-data subcommand reproduces the table from the records file.
    let out = bin()
        .arg("plot-data")
        .arg("--records")
        .arg(&out_csv)
        .output()
        .unwrap();
    assert!(out.status.success());
    let replay = String::from_utf8_lossy(&out.stdout);
    assert_eq!(replay, std::fs::read_to_string(&plot_csv).unwrap());

    // JSON mirror carries identical field names.
    let out_json = dir.join("ex.json.out");
    let status = bin()
        .arg("tradeoff")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out_json)
        .arg("--format")
        .arg("json")
        .status()
        .unwrap();
    assert!(status.success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_json).unwrap()).unwrap();
    let row = &parsed[0];
    for key in [
        "example",
        "relaxation",
        "p",
        "n_star",
        "risk_hat",
        "risk_se",
        "agg_ops",
        "proj_ops",
        "wall_ms",
        "seed",
    ] {
        assert!(row.get(key).is_some(), "missing key {key}");
    }
}

#[test]
fn complexity_and_risk_emit_json_estimates() {
    let dir = workdir("estimates");
    let cone = write(
        &dir,
        "cone.json",
        r#"{
            "mode": "exact",
            "generators": [[1.0, 0.0], [0.0, 1.0]],
            "draws": 200,
            "seed": 9
        }"#,
    );
    let out = bin()
        .arg("complexity")
        .arg("--config")
        .arg(&cone)
        .output()
        .unwrap();
    assert!(out.status.success());
    let est: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(est["draws"], 200);
    assert_eq!(est["seed"], 9);
    assert!(est["mean"].as_f64().unwrap() > 0.0);

    let risk = write(
        &dir,
        "risk.json",
        r#"{
            "signal": {"variant": "cut_matrices", "m": 2},
            "body": {"variant": "elliptope", "side": 2},
            "sigma": 1.0, "n": 4, "trials": 20, "seed": 3
        }"#,
    );
    let out = bin()
        .arg("risk")
        .arg("--config")
        .arg(&risk)
        .output()
        .unwrap();
    assert!(out.status.success());
    let est: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(est.get("mse").is_some());
    assert!(est.get("std_error").is_some());
    assert_eq!(est["trials"], 20);
}
