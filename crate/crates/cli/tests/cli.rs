// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn lindfit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lindfit"))
        .current_dir(dir)
        .env_remove("LINDFIT_CONFIG")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = lindfit(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn read(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn matrix(v: &Value) -> Vec<(f64, f64)> {
    v["data"].as_array().unwrap().iter().map(|z| (z[0].as_f64().unwrap(), z[1].as_f64().unwrap())).collect()
}

fn max_abs(v: &Value) -> f64 {
    matrix(v).iter().map(|(re, im)| re.hypot(*im)).fold(0.0, f64::max)
}

fn max_diff(a: &Value, b: &Value) -> f64 {
    matrix(a).iter().zip(matrix(b)).map(|(x, y)| (x.0 - y.0).hypot(x.1 - y.1)).fold(0.0, f64::max)
}

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Self {
        Work { dir: TempDir::new().unwrap() }
    }

    fn path(&self) -> &Path {
        self.dir.path()
    }

    fn file(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, v: &Value) {
        std::fs::write(self.file(name), serde_json::to_string(v).unwrap()).unwrap();
    }
}

#[test]
fn simulate_is_seed_deterministic_and_zero_noise_is_exact() {
    let w = Work::new();
    let d = w.path();
    ok(d, &["generate", "--kind", "secular", "--seed", "2", "-o", "g.json"]);
    let times = "0.4,0.8,1.6,3.2";
    ok(d, &["simulate", "g.json", "--times", times, "--noise-sigma", "0.01", "--seed", "9", "-o", "a.json"]);
    ok(d, &["simulate", "g.json", "--times", times, "--noise-sigma", "0.01", "--seed", "9", "-o", "b.json"]);
    ok(d, &["simulate", "g.json", "--times", times, "--noise-sigma", "0.01", "--seed", "10", "-o", "c.json"]);
    let (a, b, c) = (read(d, "a.json"), read(d, "b.json"), read(d, "c.json"));
    assert_eq!(a["dataset"], b["dataset"]);
    assert_ne!(a["dataset"], c["dataset"]);
    assert_eq!(a["manifest"]["config_digest"], b["manifest"]["config_digest"]);
    assert_eq!(a["dataset"]["times"], json!([0.4, 0.8, 1.6, 3.2]));

    ok(d, &["simulate", "g.json", "--times", times, "--noise", "0", "-o", "z.json"]);
    ok(d, &["simulate", "g.json", "--times", times, "-o", "clean.json"]);
    assert_eq!(read(d, "z.json")["dataset"], read(d, "clean.json")["dataset"]);
}

#[test]
fn manifest_records_inputs_and_config_digest() {
    let w = Work::new();
    let d = w.path();
    ok(d, &["generate", "--kind", "cp", "--seed", "1", "-o", "g.json"]);
    ok(d, &["simulate", "g.json", "--times", "0.5,1", "-o", "ds.json"]);
    let m = &read(d, "ds.json")["manifest"];
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["tool_version"], env!("CARGO_PKG_VERSION"));
    let bytes = std::fs::read(w.file("g.json")).unwrap();
    assert_eq!(m["inputs"][0]["sha256"], hex::encode(Sha256::digest(&bytes)));
    let canonical = serde_json::to_vec(&m["config"]).unwrap();
    assert_eq!(m["config_digest"], hex::encode(Sha256::digest(&canonical)));
    assert!(m["started_at"].as_str().unwrap() <= m["finished_at"].as_str().unwrap());
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let w = Work::new();
    let d = w.path();
    std::fs::write(w.file("cfg.toml"), "times = [0.25, 0.5]\nnoise_sigma = 0.02\nseed = 4\n").unwrap();
    ok(d, &["generate", "--kind", "cp", "--seed", "1", "-o", "g.json"]);
    ok(d, &["--config", "cfg.toml", "simulate", "g.json", "--seed", "7", "-o", "ds.json"]);
    let cfg = &read(d, "ds.json")["manifest"]["config"];
    assert_eq!(cfg["times"], json!([0.25, 0.5]));
    assert_eq!(cfg["noise_sigma"], json!(0.02));
    assert_eq!(cfg["seed"], json!(7));

    let out = Command::new(env!("CARGO_BIN_EXE_lindfit"))
        .current_dir(d)
        .env("LINDFIT_CONFIG", w.file("cfg.toml"))
        .args(["simulate", "g.json", "-o", "env.json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(read(d, "env.json")["manifest"]["config"]["seed"], json!(4));

    std::fs::write(w.file("bad.toml"), "nosie_sigma = 0.1\n").unwrap();
    let out = lindfit(d, &["--config", "bad.toml", "simulate", "g.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identity_data_give_a_zero_generator() {
    let w = Work::new();
    let d = w.path();
    ok(d, &["generate", "--kind", "zero", "--n", "2", "-o", "g.json"]);
    ok(d, &["simulate", "g.json", "--times", "0.5,1,2", "-o", "ds.json"]);
    for method in ["logm", "richardson", "eiglog"] {
        ok(d, &["estimate", "ds.json", "--method", method, "-o", "e.json"]);
        let r = read(d, "e.json");
        assert!(max_abs(&r["report"]["generator"]["relaxation_part"]) <= 1e-12, "{method}");
        assert!(r["report"]["chi_squared"].as_f64().unwrap() <= 1e-24);
    }
}

#[test]
fn cpfit_on_noisy_data_meets_the_penalty_tolerance() {
    let w = Work::new();
    let d = w.path();
    ok(d, &["generate", "--kind", "cp", "--n", "2", "--lindblads", "2", "--rate-scale", "0.5", "--seed", "3", "-o", "g.json"]);
    ok(d, &["simulate", "g.json", "--times", "0.25,0.5,1", "--noise-sigma", "0.01", "--seed", "1", "-o", "ds.json"]);
    let tol = 1e-7;
    let out = ok(
        d,
        &["estimate", "ds.json", "--method", "cpfit", "--structure", "full", "--tol", "1e-7", "--max-iter", "20000", "-o", "fit.json"],
    );
    let r = &read(d, "fit.json")["report"];
    assert_eq!(r["method"], "cpfit");
    let fit = &r["fit"];
    assert_eq!(fit["converged"], json!(true), "{}", stdout(&out));
    assert!(fit["penalty_at_solution"].as_f64().unwrap() <= 10.0 * tol);
    assert_eq!(r["residual_per_time"].as_array().unwrap().len(), 3);
    assert!(stdout(&out).contains("chi squared"));
}

#[test]
fn logm_warns_about_aliasing_under_strong_rotation() {
    let w = Work::new();
    let d = w.path();
    ok(d, &["generate", "--kind", "secular", "--seed", "1", "-o", "g.json"]);
    ok(d, &["simulate", "g.json", "--times", "0.4,0.8,1.6,3.2", "-o", "ds.json"]);
    let out = ok(d, &["estimate", "ds.json", "--method", "logm", "-o", "e.json"]);
    assert!(stderr(&out).contains("principal logarithm aliases"), "{}", stderr(&out));
    assert!(!read(d, "e.json")["report"]["warnings"].as_array().unwrap().is_empty());
    let out = ok(d, &["estimate", "ds.json", "--method", "richardson", "-o", "r.json"]);
    assert!(!stderr(&out).contains("warning"));
}

#[test]
fn richardson_explains_the_grid_requirement() {
    let w = Work::new();
    let d = w.path();
    ok(d, &["generate", "--kind", "cp", "-o", "g.json"]);
    ok(d, &["simulate", "g.json", "--times", "0.1,0.3", "-o", "ds.json"]);
    let out = lindfit(d, &["estimate", "ds.json", "--method", "richardson"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("doubling time grid"));
}

#[test]
fn branch_cut_is_a_numerical_failure() {
    // A π phase flip of the coherences puts −1 in the spectrum.
    let w = Work::new();
    let d = w.path();
    let zero2 = vec![[0.0, 0.0]; 4];
    let mut p = vec![[0.0, 0.0]; 16];
    for (k, s) in [(0, 1.0), (5, -1.0), (10, -1.0), (15, 1.0)] {
        p[k] = [s, 0.0];
    }
    w.write(
        "ds.json",
        &json!({
            "n": 2,
            "hamiltonian": {"rows": 2, "cols": 2, "data": zero2},
            "times": [1.0],
            "propagators": [{"rows": 4, "cols": 4, "data": p}],
        }),
    );
    let out = lindfit(d, &["estimate", "ds.json", "--method", "logm"]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
    assert!(stderr(&out).contains("branch cut"));
}

#[test]
fn unreadable_input_exits_with_parse_error() {
    let w = Work::new();
    std::fs::write(w.file("junk.json"), "{ not json").unwrap();
    assert_eq!(lindfit(w.path(), &["decompose", "junk.json"]).status.code(), Some(2));
    assert_eq!(lindfit(w.path(), &["decompose", "missing.json"]).status.code(), Some(2));
    assert_eq!(lindfit(w.path(), &["estimate"]).status.code(), Some(2));
}

#[test]
fn reference_decomposition_reports_the_adiabatic_spectrum() {
    let w = Work::new();
    let d = w.path();
    ok(d, &["generate", "--kind", "reference", "-o", "g.json"]);
    let out = ok(d, &["decompose", "g.json", "--rebuild-check", "-o", "dec.json"]);
    let table = stdout(&out);
    assert!(table.contains("0.9560, 0.2913, 0.1721"), "{table}");
    let r = &read(d, "dec.json")["decomposition"];
    let eig: Vec<f64> = r["adiabatic_eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    for (got, want) in eig.iter().zip([0.9560, 0.2913, 0.1721]) {
        assert!((got - want).abs() <= 1e-3 * want, "{got}");
    }
    assert_eq!(r["lindblads"]["terms"].as_array().unwrap().len(), 18);
    assert!(r["rebuild"]["relative_to_model"].as_f64().unwrap() < 1e-2);
}

#[test]
fn zero_generator_has_no_lindblads() {
    let w = Work::new();
    let d = w.path();
    ok(d, &["generate", "--kind", "zero", "--n", "4", "-o", "g.json"]);
    let out = ok(d, &["decompose", "g.json", "-o", "dec.json"]);
    assert!(read(d, "dec.json")["decomposition"]["lindblads"]["terms"].as_array().unwrap().is_empty());
    assert!(stdout(&out).contains("Lindblad operators (0)"));
}

#[test]
fn decompose_checks_the_declared_basis() {
    let w = Work::new();
    let d = w.path();
    ok(d, &["generate", "--kind", "reference", "-o", "g.json"]);
    let out = lindfit(d, &["decompose", "g.json", "--basis", "transition"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("basis"));
    ok(d, &["decompose", "g.json", "--basis", "zeeman"]);
    ok(d, &["generate", "--kind", "cp", "--n", "2", "-o", "small.json"]);
    assert_eq!(lindfit(d, &["decompose", "small.json"]).status.code(), Some(3));
}

#[test]
fn filter_reports_removed_mass() {
    let w = Work::new();
    let d = w.path();
    ok(d, &["generate", "--kind", "cp", "--seed", "5", "-o", "g.json"]);
    ok(d, &["simulate", "g.json", "--times", "0.5", "-o", "ds.json"]);
    let out = ok(d, &["filter-cp", "ds.json", "-o", "f1.json"]);
    assert!(stdout(&out).contains("removed negative eigenvalue mass"));
    let f1 = read(d, "f1.json");
    assert!(f1["removed_mass"][0].as_f64().unwrap() <= 1e-12);
    ok(d, &["filter-cp", "f1.json", "-o", "f2.json"]);
    let f2 = read(d, "f2.json");
    assert!(max_diff(&f1["dataset"]["propagators"][0], &f2["dataset"]["propagators"][0]) <= 1e-12);

    // vec(ρ) ↦ vec(ρᵀ): its Choi matrix is the swap, with one eigenvalue −1.
    let mut p = vec![[0.0, 0.0]; 16];
    for i in 0..2 {
        for k in 0..2 {
            p[(i * 2 + k) * 4 + (k * 2 + i)] = [1.0, 0.0];
        }
    }
    w.write("t.json", &json!({"propagator": {"rows": 4, "cols": 4, "data": p}}));
    ok(d, &["filter-cp", "t.json", "-o", "tf.json"]);
    let tf = read(d, "tf.json");
    assert!((tf["removed_mass"][0].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    ok(d, &["filter-cp", "tf.json", "-o", "tff.json"]);
    let tff = read(d, "tff.json");
    assert!(tff["removed_mass"][0].as_f64().unwrap() <= 1e-12);
    assert!(max_diff(&tf["propagator"], &tff["propagator"]) <= 1e-12);
}

#[test]
fn convert_round_trips() {
    let w = Work::new();
    let d = w.path();
    ok(d, &["generate", "--kind", "reference", "-o", "g.json"]);
    ok(d, &["convert", "g.json", "--basis", "cartesian", "-o", "c.json"]);
    ok(d, &["convert", "c.json", "--basis", "zeeman", "-o", "z.json"]);
    let (g, z) = (read(d, "g.json"), read(d, "z.json"));
    assert_eq!(read(d, "c.json")["generator"]["basis"], "cartesian");
    for part in ["relaxation_part", "hamiltonian_part"] {
        assert!(max_diff(&g["generator"][part], &z["generator"][part]) <= 1e-12);
    }
    assert_eq!(lindfit(d, &["convert", "g.json"]).status.code(), Some(2));
}

#[test]
fn fit_reports_feed_decompose() {
    let w = Work::new();
    let d = w.path();
    ok(d, &["generate", "--kind", "secular", "--seed", "4", "-o", "g.json"]);
    ok(d, &["simulate", "g.json", "--times", "0.4,0.8,1.6,3.2", "-o", "ds.json"]);
    ok(d, &["estimate", "ds.json", "--method", "richardson", "--basis", "zeeman", "-o", "e.json"]);
    ok(d, &["decompose", "e.json", "-o", "dec.json"]);
    ok(d, &["decompose", "g.json", "-o", "truth.json"]);
    let a = &read(d, "dec.json")["decomposition"]["nonadiabatic_rate"];
    let b = &read(d, "truth.json")["decomposition"]["nonadiabatic_rate"];
    assert!((a.as_f64().unwrap() - b.as_f64().unwrap()).abs() <= 1e-6);
}
