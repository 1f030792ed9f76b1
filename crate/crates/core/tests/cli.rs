use std::fs;
use std::path::Path;
use std::process::Command;

use coherent_work::cli::{run, EXIT_CHECK, EXIT_IO, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn cohwork(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("cohwork").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn decompose_point_mass_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.json", r#"{"offset": 3, "weights": [1.0]}"#);
    let (code, out, _) = cohwork(&["decompose", &f]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["factors"].as_array().unwrap().len(), 0);
    assert_eq!(v["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn decompose_reads_config_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.json", r#"{"offset": 0, "weights": [0.25, 0.25, 0.25, 0.25]}"#);
    let c = write(dir.path(), "c.json", r#"{"tol": 1e-9}"#);
    let (code, out, _) = cohwork(&["decompose", &f, "--tol", "1e-3", "--config", &c]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tolerances"]["tol"].as_f64().unwrap(), 1e-9);
    assert_eq!(v["result"]["factors"].as_array().unwrap().len(), 2);
}

#[test]
fn cwp_build_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", r#"{"offset": 0, "weights": [0.25, 0.25, 0.25, 0.25]}"#);
    let q = write(dir.path(), "q.json", r#"{"offset": 5, "weights": [0.5, 0.5]}"#);
    let r = write(dir.path(), "r.json", r#"{"offset": -5, "weights": [0.5, 0.0, 0.5]}"#);
    let rec = dir.path().join("rec.json");
    let (code, _, err) = cohwork(&["cwp", "build", "--p", &p, "--q", &q, "--r", &r, "--out", rec.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let (code, out, _) = cohwork(&["cwp", "check", rec.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"passed\": true"));

    // Swap the two output amplitudes; the stored record no longer matches.
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&rec).unwrap()).unwrap();
    let amps = v["result"]["output"]["amplitudes"].as_array_mut().unwrap();
    let n = amps.len();
    amps.swap(n - 1, n - 3);
    fs::write(&rec, serde_json::to_string(&v).unwrap()).unwrap();
    let (code, _, _) = cohwork(&["cwp", "check", rec.to_str().unwrap()]);
    assert_eq!(code, EXIT_CHECK);
}

#[test]
fn cwp_build_rejects_mismatched_triple() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", r#"{"offset": 0, "weights": [0.5, 0.5]}"#);
    let q = write(dir.path(), "q.json", r#"{"offset": 5, "weights": [0.5, 0.0, 0.5]}"#);
    let r = write(dir.path(), "r.json", r#"{"offset": -5, "weights": [1.0]}"#);
    let (code, _, err) = cohwork(&["cwp", "build", "--p", &p, "--q", &q, "--r", &r]);
    assert_eq!(code, EXIT_CHECK);
    assert!(err.contains("differs"));
}

#[test]
fn potential_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", r#"{"offset": 0, "amplitudes": [[0.6, 0.0], [0.0, 0.8]]}"#);
    let (code, out, _) = cohwork(&["potential", "--state", &s, "--beta-grid", "0:2:0.5"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# config_sha256="));
    assert_eq!(lines[1], "beta,lambda,kappa1,kappa2,kappa3,kappa4,chi_m,beta_m");
    assert_eq!(lines.len(), 2 + 5);
    let row: Vec<f64> = lines[2].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[0], 0.0);
    assert_eq!(row[1], 0.0);
    assert!((row[2] - 0.64).abs() < 1e-12);
}

fn crooks_files(dir: &Path, psi1: &str, checks: &str) -> String {
    write(dir, "s0.json", r#"{"offset": 0, "amplitudes": [[0.6, 0.0], [0.0, 0.8]]}"#);
    write(dir, "s1.json", psi1);
    write(dir, "w.json", r#"{"offset": 0, "amplitudes": [[1.0, 0.0]]}"#);
    write(
        dir,
        "scenario.json",
        &format!(
            r#"{{"version": "1", "psi0": "s0.json", "psi1": "s1.json", "omega": "w.json",
                "bath": {{"h0": [0, 1, 2], "h1": [0, 1]}}, "betas": [0.1, 1.0, 5.0], "seeds": [3, 4],
                "checks": {checks}}}"#
        ),
    )
}

#[test]
fn crooks_run_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let checks = r#"["effective-potential", "mean-coherence", "relative-entropy"]"#;
    let cfg = crooks_files(dir.path(), r#"{"offset": 0, "amplitudes": [[0.0, 0.0], [1.0, 0.0]]}"#, checks);
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert_eq!(cohwork(&["crooks", "run", "--config", &cfg, "--out", a.to_str().unwrap()]).0, EXIT_OK);
    assert_eq!(cohwork(&["crooks", "run", "--config", &cfg, "--out", b.to_str().unwrap()]).0, EXIT_OK);
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["result"]["cells"].as_array().unwrap().len(), 6);
    assert!(v["tolerances"]["crooks"].as_f64().unwrap() > 0.0);
}

#[test]
fn crooks_run_checks_coherent_work_identity() {
    let dir = tempfile::tempdir().unwrap();
    // Same state and a zero-energy work state: the identity holds trivially.
    let cfg = crooks_files(dir.path(), r#"{"offset": 0, "amplitudes": [[0.6, 0.0], [0.0, 0.8]]}"#, r#"["coherent-work"]"#);
    let (code, out, _) = cohwork(&["crooks", "run", "--config", &cfg]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["coherent_work"]["Ok"]["sign"], "minus");
}

#[test]
fn crooks_reverse_zero_is_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "e0.json", r#"{"offset": 0, "amplitudes": [[1.0, 0.0]]}"#);
    write(dir.path(), "e5.json", r#"{"offset": 5, "amplitudes": [[1.0, 0.0]]}"#);
    let cfg = write(
        dir.path(),
        "scenario.json",
        r#"{"version": "1", "psi0": "e0.json", "psi1": "e5.json", "bath": {"h0": [0], "h1": [0]}, "betas": [1.0]}"#,
    );
    let (code, out, err) = cohwork(&["crooks", "run", "--config", &cfg]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("warning"));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["result"]["cells"][0]["crooks"]["warning"].is_string());
    assert!(v["result"]["cells"][0]["crooks"]["lhs_ratio"].is_null());
}

#[test]
fn bad_inputs_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cohwork(&["decompose"]).0, EXIT_USAGE);
    assert_eq!(cohwork(&["nonsense"]).0, EXIT_USAGE);
    assert_eq!(cohwork(&["decompose", "/nonexistent/p.json"]).0, EXIT_IO);
    let bad = write(dir.path(), "bad.json", "{not json");
    assert_eq!(cohwork(&["decompose", &bad]).0, EXIT_IO);
    let s = write(dir.path(), "s.json", r#"{"offset": 0, "amplitudes": [[1.0, 0.0]]}"#);
    assert_eq!(cohwork(&["potential", "--state", &s, "--beta-grid", "1:0:1"]).0, EXIT_USAGE);
    let cfg = write(
        dir.path(),
        "scenario.json",
        r#"{"version": "9", "psi0": "s.json", "psi1": "s.json", "bath": {"h0": [0], "h1": [0]}, "betas": [1.0]}"#,
    );
    assert_eq!(cohwork(&["crooks", "run", "--config", &cfg]).0, EXIT_USAGE);
    let unnormalized = write(dir.path(), "u.json", r#"{"offset": 0, "weights": [0.5, 0.4]}"#);
    assert_eq!(cohwork(&["decompose", &unnormalized]).0, EXIT_CHECK);
}

#[test]
fn examples_subcommand_all_pass() {
    let (code, out, _) = cohwork(&["examples"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 5);
    assert!(!out.contains("FAIL"));
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_cohwork");
    assert_eq!(Command::new(bin).arg("examples").output().unwrap().status.code(), Some(0));
    assert_eq!(Command::new(bin).arg("bogus").output().unwrap().status.code(), Some(2));
}
