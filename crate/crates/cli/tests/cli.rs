use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sitterloc"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn pack_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/oracle_pack.json")
}

#[test]
fn classify_both_series_and_excluded_mass() {
    let out = run(&["classify", "--M", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["series"], "complementary");
    assert!((v["q"].as_f64().unwrap() - 0.25).abs() < 1e-14);

    let v = json(&run(&["classify", "--M", "2.5"]));
    assert_eq!(v["series"], "principal");
    assert!((v["q"].as_f64().unwrap() - 6.25).abs() < 1e-13);

    let out = run(&["classify", "--M", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("excluded case"));
}

#[test]
fn ortho_presets_pass() {
    for args in [
        &["ortho", "--M", "0.5", "--t0", "0", "--lmax", "4"][..],
        &["ortho", "--M", "2.5", "--t0", "0.7", "--lmax", "4"][..],
        &["ortho", "--M", "2.5", "--sector", "negative", "--lmax", "4"][..],
        &["ortho", "--M", "0.5", "--sector", "cross", "--lmax", "3"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(json(&out)["max_deviation"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn impossible_tolerance_is_a_numerical_failure() {
    let out = run(&["ortho", "--M", "2.5", "--lmax", "3", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["ortho", "--grid", "12by24"]).status.code(), Some(2));
    assert_eq!(run(&["ortho", "--lmax", "20", "--grid", "8x64"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["ortho", "--config", "/nonexistent.cfg"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# preset\nM = 0.5\nalpha = 2\n").unwrap();
    let v = json(&run(&["classify", "--config", cfg.to_str().unwrap()]));
    assert_eq!(v["series"], "complementary");
    assert!((v["alpha"].as_f64().unwrap() - 2.0).abs() < 1e-15);
    let v = json(&run(&["classify", "--config", cfg.to_str().unwrap(), "--M", "3"]));
    assert_eq!(v["series"], "principal");
}

#[test]
fn casimir_report() {
    let out = run(&["casimir", "--M", "2.5", "--lmax", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["entries"].as_array().unwrap().len(), 4);
    assert!(v["max_r"].as_f64().unwrap() < 1e-4);
}

#[test]
fn evolve_writes_trace_with_unit_norm() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["evolve", "--M", "2.5", "--lmax", "5", "--steps", "4", "--t1", "1", "--theta0", "0.8", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x,y,z,norm"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    for r in rows {
        let norm: f64 = r.split(',').last().unwrap().parse().unwrap();
        assert!((norm - 1.0).abs() < 1e-12);
    }
    assert!(!csv.contains('\r'));
    let trace: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("trace.json")).unwrap()).unwrap();
    assert_eq!(trace["t"].as_array().unwrap().len(), 4);
    assert!(dir.path().join("density.csv").exists());
}

#[test]
fn evolve_is_deterministic() {
    let args = ["evolve", "--M", "0.5", "--lmax", "4", "--steps", "3", "--packet", "random", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn position_isotropic_state_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("iso.json");
    std::fs::write(&state, r#"{"l_max": 2, "coeffs": [{"l": 0, "m": 0, "re": 1.0, "im": 0.0}]}"#).unwrap();
    let out = run(&["position", "--M", "2.5", "--lmax", "2", "--steps", "2", "--state", state.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    for row in v["pairing"].as_array().unwrap().iter().chain(v["density"].as_array().unwrap()) {
        for x in row.as_array().unwrap() {
            assert!(x.as_f64().unwrap().abs() < 1e-10);
        }
    }
    assert_eq!(v["routes_agree"], true);
    assert_eq!(v["parity_covariant"], true);

    let v = json(&run(&["position", "--M", "0.5", "--lmax", "4", "--steps", "2", "--theta0", "0.3"]));
    assert_eq!(v["passed"], true);
    assert!(v["pairing"][0][2].as_f64().unwrap() > 0.3);
}

#[test]
fn signdemo_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["signdemo", "--M", "2.5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["alternating_wins"], true);
    assert_eq!(v["signs_alternate"], true);
    let profiles = std::fs::read_to_string(dir.path().join("profiles.csv")).unwrap();
    assert!(profiles.starts_with("theta,opposite_signs,equal_signs\n"));
    let peaks = std::fs::read_to_string(dir.path().join("peaks.csv")).unwrap();
    assert_eq!(peaks.lines().count(), 22);
}

#[test]
fn fixtures_verify_full_pack() {
    let out = run(&["fixtures-verify", pack_path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!(v["records"].as_u64().unwrap() >= 200);
    assert_eq!(v["failed"], 0);
}

#[test]
fn fixtures_verify_reports_corrupted_record() {
    let mut pack: Value = serde_json::from_str(&std::fs::read_to_string(pack_path()).unwrap()).unwrap();
    pack["records"][7]["value"]["re"] = Value::from("12345.678");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&pack).unwrap()).unwrap();
    let out = run(&["fixtures-verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["failed_indices"], serde_json::json!([7]));
    assert!(String::from_utf8_lossy(&out.stderr).contains("record 7"));
}

#[test]
fn fixtures_verify_missing_and_malformed() {
    let out = run(&["fixtures-verify", "/definitely/missing/pack.json"]);
    assert_eq!(out.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("schema.json");
    std::fs::write(&path, r#"{"header": {}, "records": []}"#).unwrap();
    assert_eq!(run(&["fixtures-verify", path.to_str().unwrap()]).status.code(), Some(2));
}
