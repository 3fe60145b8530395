//! The `nilflow` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn nilflow(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nilflow"));
    cmd.args(args);
    match threads {
        Some(n) => cmd.env("NILFLOW_THREADS", n),
        None => cmd.env_remove("NILFLOW_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_scenario(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const INTERVAL: &str = r#"{
  "spec_version": 1,
  "id": "interval_small",
  "mode": "translated_body",
  "lattice": "integer",
  "translate": [[0], [1]],
  "body": {"polytope": [[0], [2]]},
  "schedule": {"t_values": [10, 100]},
  "embedding": {"sample_density": 50}VERIFY
}"#;

#[test]
fn lists_bundled_scenarios() {
    let o = nilflow(&["scenarios"], None);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 8);
    for name in ["sample64_translates", "heis_orbit_irrational", "kss_style_curve_polytope"] {
        assert!(out.contains(name), "{out}");
    }
}

#[test]
fn predict_json_is_byte_stable() {
    let first = nilflow(&["predict", "heis_orbit_irrational", "--json"], None);
    assert!(first.status.success(), "{}", stderr(&first));
    for threads in ["1", "2", "4"] {
        let again = nilflow(&["predict", "heis_orbit_irrational", "--json"], Some(threads));
        assert_eq!(first.stdout, again.stdout);
    }
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["prediction"]["classification"], "ConvergesStronglyToFull");
}

#[test]
fn predict_text_reports_limits() {
    let o = nilflow(&["predict", "sample64_translates"], None);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("V = span{(0, 1)}"), "{out}");
    assert!(out.contains("classification: NotFull"), "{out}");
}

#[test]
fn raw_scenarios_cannot_be_predicted() {
    let o = nilflow(&["predict", "sample64_lines_raw"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("raw"));
}

#[test]
fn closure_command() {
    let o = nilflow(&["closure", "--subspace", "[[1, [0, 1]]]", "--field", "sqrt:2"], None);
    assert!(o.status.success());
    assert!(stdout(&o).contains("closure = span{(1, 0), (0, 1)} (full)"));
    let o = nilflow(&["closure", "--subspace", "[[1, 1]]", "--lattice", "[[2, 0], [0, 1]]"], None);
    assert!(o.status.success());
    assert!(stdout(&o).contains("closure = span{(1, 1)}"), "{}", stdout(&o));
}

#[test]
fn verify_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "ok.json", &INTERVAL.replace("VERIFY", ""));
    let out = dir.path().join("out");
    let o = nilflow(&["verify", &path, "--out", out.to_str().unwrap(), "--svg"], None);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("result: PASS"));
    let csv = std::fs::read_to_string(out.join("interval_small.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,sound_dH,worst_target_dist,samples_used,wall_ms"));
    assert_eq!(csv.lines().count(), 3);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("interval_small.json")).unwrap()).unwrap();
    assert_eq!(json["verdicts"]["passed"], true);
    assert!(std::fs::read_to_string(out.join("interval_small.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn lattice_scale_changes_the_verdict_and_file_name() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "s.json", &INTERVAL.replace("VERIFY", ""));
    let out = dir.path().join("out");
    let o = nilflow(&["verify", &path, "--lattice-scale", "3", "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("observed proper, predicted proper"), "{}", stdout(&o));
    assert!(out.join("interval_small_N3.csv").exists());
}

#[test]
fn failed_verdicts_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let tight = r#", "verify": {"sound": 1e-9, "complete": 1e-9}"#;
    let path = write_scenario(dir.path(), "tight.json", &INTERVAL.replace("VERIFY", tight));
    let o = nilflow(&["verify", &path], None);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("result: FAIL"));
}

#[test]
fn malformed_scenarios_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(dir.path(), "bad.json", "{\n  \"spec_version\": 1,\n  \"id\": \"x\",\n  \"mode\": \"sideways\"\n}");
    let o = nilflow(&["verify", &path], None);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("line 4"), "{err}");

    let o = nilflow(&["predict", "no_such_scenario"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("neither a file nor a bundled scenario"));
}
