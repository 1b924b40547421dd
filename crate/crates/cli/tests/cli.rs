use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use zeromass_sim::export::read_spinor_binary;

fn zeromass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeromass"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("config.json");
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

const SMALL: &str = r#"{"grid": {"n": 8, "steps": 12, "dt": 0.05}, "band": 2, "seed": 3}"#;

#[test]
fn verify_algebra_passes_and_lists_identities() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = zeromass(&["verify-algebra", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    assert_eq!(r["passed"], true);
    assert!(r["results"]["identities_passed"].as_u64().unwrap() >= 20);
    assert_eq!(r["tool"], "zeromass");
    assert!(r["version"].is_string());
    assert!(r["seed"].is_u64());
    assert!(r["config"]["grid"]["n"].is_u64());
}

#[test]
fn corrupted_sigma_fixture_fails_with_named_identity() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"test_fixture": "corrupt_sigma1"}"#);
    let out = dir.path().join("out");
    let o = zeromass(&["verify-algebra", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("FAILED [pauli_algebra[SIGMA[corrupted]]]"), "{stdout}");
    assert!(stdout.contains("{M1, M1} = 2*1"), "{stdout}");
    assert_eq!(report(&out)["passed"], false);
}

#[test]
fn corrupted_sigma_fixture_refuses_numerical_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"grid": {"n": 8, "steps": 4}, "band": 2, "test_fixture": "corrupt_sigma1"}"#,
    );
    let out = dir.path().join("out");
    let o = zeromass(&["run", "duality", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stdout).contains("not a certified Pauli algebra"));
}

#[test]
fn usage_errors_exit_one() {
    let o = zeromass(&["verify-algebra", "--bogus"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(code(&zeromass(&["run", "everything"])), 1);
    assert_eq!(code(&zeromass(&[])), 1);
    assert_eq!(code(&zeromass(&["--help"])), 0);
    assert_eq!(code(&zeromass(&["run", "all", "--config", "/nonexistent/zeromass.json"])), 1);
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), r#"{"tolerances": {"duality": -1}}"#);
    assert_eq!(code(&zeromass(&["verify-algebra", "--config", &bad])), 1);
    let bad = write_config(dir.path(), r#"{"grid": {"n": 7}}"#);
    assert_eq!(code(&zeromass(&["verify-algebra", "--config", &bad])), 1);
    let bad = write_config(dir.path(), "{not json");
    assert_eq!(code(&zeromass(&["verify-algebra", "--config", &bad])), 1);
}

#[test]
fn verify_equivalence_reports_conventions_and_sign_search() {
    let dir = tempfile::tempdir().unwrap();
    let o = zeromass(&["verify-equivalence", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("7/7 equivalence claims confirmed"));
    let r = report(dir.path());
    assert_eq!(r["results"]["confirmed_count"], 7);
    assert_eq!(r["results"]["sk_sign_search"]["assignments_tested"], 64);
    assert!(r["results"]["sk_sign_search"]["as_printed_passes"].is_boolean());
    let channels = r["results"]["default_scalar_channels"].as_array().unwrap();
    assert_eq!(channels.len(), 2);
}

#[test]
fn run_all_small_grid_writes_report_and_series() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = zeromass(&[
        "run", "all", "--config", &cfg, "--out", out.to_str().unwrap(), "--plot", "--parallel", "2",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(&out);
    for suite in ["duality", "neutrino", "constraints", "generalized"] {
        assert_eq!(r["results"][suite]["passed"], true, "{suite}");
    }
    assert_eq!(r["seed"], 3);
    for f in [
        "duality_pairwise.csv",
        "neutrino.csv",
        "constraints.csv",
        "constraints_control.csv",
        "generalized_sigma_rs.csv",
        "plot.py",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    let csv = fs::read_to_string(out.join("duality_pairwise.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = zeromass(&[
        "run", "neutrino", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "11", "--steps", "5",
        "--dt", "0.1",
    ]);
    assert_eq!(code(&o), 0);
    let r = report(&out);
    assert_eq!(r["seed"], 11);
    assert_eq!(r["config"]["grid"]["steps"], 5);
    assert_eq!(r["config"]["grid"]["dt"], 0.1);
    assert_eq!(r["results"]["neutrino"]["times"].as_array().unwrap().len(), 5);
}

#[test]
fn wrong_speed_for_one_formulation_fails_duality() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"grid": {"n": 8, "steps": 21}, "band": 2, "c_overrides": {"ALPHA_SK": 1.01}}"#,
    );
    let out = dir.path().join("out");
    let o = zeromass(&["run", "duality", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let r = report(&out);
    assert_eq!(r["passed"], false);
    assert_eq!(r["config"]["c_overrides"]["ALPHA_SK"], 1.01);
}

#[test]
fn export_writes_readable_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = zeromass(&[
        "export", "--config", &cfg, "--out", out.to_str().unwrap(), "--formulation", "ALPHA_SK",
        "--snapshot", "3",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let bytes = fs::read(out.join("alpha_sk_s0003.zmdw")).unwrap();
    let dump = read_spinor_binary(&bytes[..]).unwrap();
    assert_eq!((dump.n, dump.m), (8, 4));
    let fields = fs::read_to_string(out.join("alpha_sk_s0003_fields.csv")).unwrap();
    assert_eq!(fields.lines().count(), 513);
    assert!(fields.starts_with("ix,iy,iz,x,y,z,E1,E2,E3,B1,B2,B3,E0,B0"));
    let o = zeromass(&["export", "--config", &cfg, "--out", out.to_str().unwrap(), "--snapshot", "99"]);
    assert_eq!(code(&o), 1);
}
