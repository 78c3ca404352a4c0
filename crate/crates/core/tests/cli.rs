use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

/// Runs the CLI in-process; returns the exit code, stdout and stderr.
fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("wavelab").chain(args.iter().copied());
    let code = wavelab::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Writes `json` as a config file inside `dir`.
fn config(dir: &TempDir, json: &str) -> String {
    let path = dir.path().join("config.json");
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn dispersion_defaults() {
    let (code, out, _) = run(&["dispersion"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["c"].as_f64().unwrap() - 31.2977).abs() < 1e-4);
    for key in ["alpha", "A", "m"] {
        assert!(v[key].is_f64(), "{key} missing");
    }
}

#[test]
fn dispersion_classical_limit_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, r#"{"constants": {"omega": 0.0}, "wave": {"k": 1.0, "b0": -0.5}}"#);
    let out_dir = dir.path().join("out");
    let (code, out, _) = run(&["dispersion", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let c = v["c"].as_f64().unwrap();
    assert!((c - 9.8_f64.sqrt()).abs() < 4.0 * f64::EPSILON * c);
    assert_eq!(read_json(&out_dir.join("dispersion.json")), v);
}

#[test]
fn negative_wavenumber_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, r#"{"wave": {"k": -1.0}}"#);
    let (code, _, err) = run(&["dispersion", "--config", &cfg]);
    assert_eq!(code, 2);
    assert!(err.contains("wavenumber must be positive"), "{err}");
}

#[test]
fn usage_and_config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["profile", "--format", "png"]).0, 2);
    let unknown = config(&dir, r#"{"wave": {"k": 0.01, "kk": 1}}"#);
    assert_eq!(run(&["dispersion", "--config", &unknown]).0, 2);
    let missing = dir.path().join("absent.json");
    assert_eq!(run(&["dispersion", "--config", missing.to_str().unwrap()]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn thread_cap_must_be_positive() {
    let status = Command::new(env!("CARGO_BIN_EXE_wavelab"))
        .arg("dispersion")
        .env("WAVELAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_wavelab"))
        .arg("dispersion")
        .env("WAVELAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn smooth_trochoid_profile() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, r#"{"wave": {"k": 0.01, "b0": -50.0}, "grid": {"surface_samples": 64}}"#);
    let out = dir.path().join("out");
    let (code, _, err) = run(&["profile", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(out.join("profile.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("X,Z"));
    assert_eq!(lines.count(), 64);
    let summary = read_json(&out.join("profile.json"));
    let height = summary["crest_to_trough"].as_f64().unwrap();
    let expected = 2.0 * (-0.5_f64).exp() / 0.01;
    assert!((height - expected).abs() < 1e-9 * expected, "{height} vs {expected}");
    assert_eq!(summary["curve"], "trochoid");
    assert_eq!(summary["periodic"], true);
    assert!(summary["cusp_indices"].as_array().unwrap().is_empty());
    let svg = std::fs::read_to_string(out.join("profile.svg")).unwrap();
    assert!(svg.contains("viewBox=\"0 0 1000 400\""));
}

#[test]
fn cycloid_profile_flags_the_cusp() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, r#"{"wave": {"k": 0.01, "b0": 0.0}, "output": {"formats": ["json"]}}"#);
    let out = dir.path().join("out");
    assert_eq!(run(&["profile", "--config", &cfg, "--out", out.to_str().unwrap()]).0, 0);
    let summary = read_json(&out.join("profile.json"));
    assert_eq!(summary["curve"], "cycloid");
    assert_eq!(summary["cusp_indices"][0], 0);
    assert!(!out.join("profile.csv").exists());
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, b"x").unwrap();
    let (code, _, _) = run(&["profile", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(code, 3);
}

#[test]
fn particle_radii_and_periods() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let (code, _, err) = run(&["paths", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let summary = read_json(&out.join("paths.json"));
    let particles = summary["particles"].as_array().unwrap();
    assert_eq!(particles.len(), 3);
    let radii: Vec<f64> = particles.iter().map(|p| p["radius"].as_f64().unwrap()).collect();
    assert!((radii[1] / radii[0] - (-0.5_f64).exp()).abs() < 1e-12);
    assert!((radii[2] / radii[0] - (-1.5_f64).exp()).abs() < 1e-12);
    let expected = summary["expected_period"].as_f64().unwrap();
    for p in particles {
        let measured = p["diagnostics"]["measured_period"].as_f64().unwrap();
        assert!((measured / expected - 1.0).abs() < 1e-6);
        let csv = std::fs::read_to_string(out.join(p["file"].as_str().unwrap())).unwrap();
        assert!(csv.starts_with("t,X,Z\n"));
    }
}

#[test]
fn particle_above_surface_is_reported_and_run_continues() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        &dir,
        r#"{"paths": {"particles": [{"point": {"x": 0.0, "z": 200.0}}, {"scaled": {"ka": 0.0, "kb": -1.0}}]}}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(run(&["paths", "--config", &cfg, "--out", out.to_str().unwrap()]).0, 0);
    let summary = read_json(&out.join("paths.json"));
    assert_eq!(summary["particles"][0]["status"], "error");
    assert_eq!(summary["particles"][1]["status"], "ok");
}

#[test]
fn empty_particle_list_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, r#"{"paths": {"particles": []}}"#);
    assert_eq!(run(&["paths", "--config", &cfg]).0, 2);
}

#[test]
fn laminar_verify_skips_gerstner_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, r#"{"laminar": {"profile": {"linear": {"shear": 0.01}}, "depth": 100.0, "eta0": 2.0}}"#);
    let out = dir.path().join("out");
    let (code, stdout, _) = run(&["verify", "--config", &cfg, "--out", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0, "{stdout}");
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["flow"], "laminar");
    let checks = report["checks"].as_array().unwrap();
    for c in checks {
        let gerstner_only = !matches!(c["group"].as_str().unwrap(), "laminar" | "dispersion") || c["name"] == "bed_violation";
        let expected = if gerstner_only { "n/a" } else { "pass" };
        assert_eq!(c["status"], expected, "{c}");
    }
    assert!(!out.join("report.csv").exists());
}

#[test]
fn injected_pressure_fault_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&dir, r#"{"fault": {"pressure_amplitude": 1e-3}, "grid": {"streamline_points": 16}}"#);
    let out = dir.path().join("out");
    let (code, _, _) = run(&["verify", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 1);
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["passed"], false);
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail" || c["status"] == "error")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["streamline_spread"]);
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(csv.lines().any(|l| l.contains("streamline_spread") && l.contains("fail")));
}
