use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_analyticity"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("GEVREY_WORKERS", "1")
        .output()
        .expect("binary runs")
}

fn rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(|r| r.unwrap()).collect()
}

fn column(path: &Path, name: &str) -> Vec<String> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let idx = rdr.headers().unwrap().iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rdr.records().map(|r| r.unwrap()[idx].to_string()).collect()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_analyticity")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lemmas_verify_without_violations() {
    let dir = TempDir::new().unwrap();
    let out = run(&["verify-lemmas", "--max-order", "12", "--star-range", "60"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let pass = column(&dir.path().join("certificates.csv"), "pass");
    assert!(!pass.is_empty());
    assert!(pass.iter().all(|p| p == "true"));
    let m = manifest(dir.path());
    assert_eq!(m["constants"]["violations.choose"], 0);
    assert_eq!(m["constants"]["star.sup_exact"], "2/3");
}

#[test]
fn shear_tracking_keeps_the_bound_below_the_exact_radius() {
    let dir = TempDir::new().unwrap();
    let out = run(&["run-shear", "--t-grid", "1:1:50", "--track-radius"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("radius.csv");
    let measured = column(&path, "tau_measured");
    let lower = column(&path, "tau_lower");
    // t = 0 is prepended for the integral in G
    assert_eq!(measured.len(), 51);
    for (m, l) in measured.iter().zip(&lower) {
        assert!(m.parse::<f64>().unwrap() >= l.parse::<f64>().unwrap(), "{m} < {l}");
    }
    assert_eq!(manifest(dir.path())["constants"]["radius.lower_bound_violations"], 0);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let args: [&[&str]; 2] = [
        &["run-euler", "--n", "32", "--t-final", "0.2", "--init", "random-analytic:4", "--track-radius"],
        &["run-shear", "--t-grid", "0:0.5:5", "--track-radius", "--measured", "fit"],
    ];
    for a in args {
        let (x, y) = (TempDir::new().unwrap(), TempDir::new().unwrap());
        assert!(run(a, x.path()).status.success());
        assert!(run(a, y.path()).status.success());
        for name in std::fs::read_dir(x.path()).unwrap().map(|e| e.unwrap().file_name()) {
            let (p, q) = (x.path().join(&name), y.path().join(&name));
            if p.is_file() && name.to_string_lossy() != "manifest.json" {
                assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&q).unwrap(), "{name:?} differs");
            }
        }
    }
}

#[test]
fn flags_override_the_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[run-euler]\nn = 16\nt-final = 0.3\nsnap-every = 0.1\ninit = \"random-analytic:2\"\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&["run-euler", "--config", cfg.to_str().unwrap(), "--t-final", "0.1"], &out_dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(rows(&out_dir.join("euler.csv")).len(), 2);
    let m = manifest(&out_dir);
    assert_eq!(m["config"]["n"], 16);
    assert_eq!(m["config"]["t-final"], 0.1);
}

#[test]
fn unknown_config_keys_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[run-euler]\nresolution = 16\n").unwrap();
    let out = run(&["run-euler", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn recorded_trajectories_can_be_retracked() {
    let dir = TempDir::new().unwrap();
    let euler = dir.path().join("euler");
    let out = run(
        &["run-euler", "--n", "32", "--t-final", "0.3", "--init", "random-analytic:5", "--save-snapshots", "--track-radius"],
        &euler,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let tau0 = manifest(&euler)["constants"]["radius.tau0"].as_f64().unwrap().to_string();
    let track = dir.path().join("track");
    let traj = euler.join("trajectory.csv");
    let field = euler.join("snapshots/velocity_0000.snap");
    let out = run(
        &["track-radius", "--traj", traj.to_str().unwrap(), "--field", field.to_str().unwrap(), "--tau0", &tau0],
        &track,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(euler.join("radius.csv")).unwrap(), std::fs::read(track.join("radius.csv")).unwrap());
}

#[test]
fn neumann_and_probe_subcommands_report_constants() {
    let dir = TempDir::new().unwrap();
    let neumann = dir.path().join("neumann");
    let out = run(&["solve-neumann", "--n", "16", "--max-order", "3"], &neumann);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = manifest(&neumann);
    assert!(m["constants"]["recursion.max_relative_error"].as_f64().unwrap() < 1e-12);
    assert!(m["constants"]["remark52.max_ratio"].as_f64().unwrap() <= 0.5 + 1e-12);

    let probes = dir.path().join("probes");
    let out = run(&["probe-bounds", "--n", "16", "--m-max", "8", "--m-sweep", "6"], &probes);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let kinds = column(&probes.join("probes.csv"), "kind");
    assert_eq!(kinds, ["commutator", "commutator", "pressure", "pressure"]);
    // every reported constant is in the manifest
    let m = manifest(&probes);
    for key in ["commutator.implied_constant.m6", "commutator.implied_constant.m8", "pressure.implied_constant.m8"] {
        assert!(m["constants"][key].is_number(), "{key}");
    }
}
