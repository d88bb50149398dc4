use std::path::PathBuf;
use std::process::{Command, Output};

fn gkcurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkcurv")).args(args).output().expect("gkcurv runs")
}

fn scene(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenes").join(name).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

#[test]
fn shipped_scene_passes_with_identical_reports() {
    let s = scene("hyperkahler_t4.json");
    let a = gkcurv(&["--format", "json", "--seed", "5", "run", &s]);
    let b = gkcurv(&["--format", "json", "--seed", "5", "run", &s]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "gkcurv-report/1");
    assert_eq!(v["failed"], 0);
}

#[test]
fn failing_expectation_exits_one() {
    let src = std::fs::read_to_string(scene("hyperkahler_t4.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&src).unwrap();
    let tasks = v["tasks"].as_array_mut().unwrap();
    let t = tasks.iter_mut().find(|t| t["op"] == "curvature").expect("curvature task");
    t["expect"] = serde_json::json!({ "gric_zero": false });
    let p = scratch("hk_wrong.json");
    std::fs::write(&p, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    assert_eq!(gkcurv(&["run", p.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn malformed_scene_exits_two_and_names_the_field() {
    let p = scratch("bad.json");
    std::fs::write(&p, r#"{"schema":"gkcurv-scene/1","name":"bad","chart":{"coords":["x","y"],"periodic":[false,false]},"j1":{"kind":"symplectic","omega":{"dx^dy":"1+"}},"psi":{"omega":{"dx^dy":"1"}},"tasks":[]}"#).unwrap();
    let out = gkcurv(&["run", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("j1.omega"), "{err}");
}

#[test]
fn examples_export_and_run() {
    let list = String::from_utf8(gkcurv(&["example", "--list"]).stdout).unwrap();
    assert!(list.lines().any(|l| l == "flat_kahler_1"));
    let p = scratch("fs.json");
    let out = gkcurv(&["example", "fubini_study_1", "--export", p.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(gkcurv(&["run", p.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn calibrate_matches_fixture() {
    let out = gkcurv(&["calibrate"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), gkcore::calibrate::FIXTURE);
}
