use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causal-horizon"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("CAUSAL_HORIZON_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_names_every_space_and_demo() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--list"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for name in ["minkowski2", "strip", "punctured", "slit", "cylinder", "grapefruit", "io-counterexample", "warning-example", "punctured-gap"] {
        assert!(s.contains(name), "{name} missing from {s}");
    }
}

#[test]
fn empty_relation_is_not_connex() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("chron.json");
    fs::write(&input, r#"{"points":["a","b","c"],"chron":[]}"#).unwrap();
    let o = run(&["validate", "--input", input.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("validate.json")).unwrap()).unwrap();
    assert_eq!(report["connex"], false);
    assert_eq!(report["irreflexive"], true);
}

#[test]
fn strip_boundary_chart_and_respect() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["boundary", "--space", "strip", "--h", "0.015625"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let csv = fs::read_to_string(dir.path().join("boundary_chart.csv")).unwrap();
    assert!(csv.starts_with("handle,c,endpoint_t,endpoint_x,error"));
    assert_eq!(csv.lines().count(), 64);
    assert!(dir.path().join("respect.json").exists());
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["validate", "--space", "nowhere"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["demo", "nothing"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["warp"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["validate", "--window", "0,1,0"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["validate", "--bogus"], dir.path()).status.code(), Some(2));
}

#[test]
fn divergent_warp_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("warp.json");
    fs::write(&spec, r#"{"interval":[0,1],"dt":0.0625,"factors":[{"graph":{"segment":{"n":8,"edge":0.125}},"warp":"(b-t)^2"}]}"#).unwrap();
    let o = run(&["warp", "--spec", spec.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("warp.json")).unwrap()).unwrap();
    assert_eq!(v["refused"], true);
}

#[test]
fn poset_shorthand_writes_derived_relations() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["poset", "--spec", "total:4"], dir.path());
    // gamma is empty on a total order, so it is not connex
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("poset_derived.json")).unwrap()).unwrap();
    assert_eq!(v["beta"]["leq"].as_array().unwrap().len(), 0);
    assert_eq!(v["gamma"]["points"].as_array().unwrap().len(), 4);
}

#[test]
fn io_counterexample_demo() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["demo", "io-counterexample", "--horizon", "256"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(dir.path().join("demo_io_counterexample.csv").exists());
}

#[test]
fn outputs_do_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let args = ["converge", "--space", "strip", "--h", "0.0625", "--horizon", "32"];
    let oa = run(&[&args[..], &["--workers", "1"]].concat(), &a);
    assert_eq!(oa.status.code(), Some(0), "{}", stdout(&oa));
    // a second process with the default pool
    run(&args, &b);
    assert_eq!(fs::read(a.join("converge.csv")).unwrap(), fs::read(b.join("converge.csv")).unwrap());
}

#[test]
fn env_var_overrides_out() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("env");
    let o = Command::new(env!("CARGO_BIN_EXE_causal-horizon"))
        .args(["ladder", "--out", "ignored-dir"])
        .env("CAUSAL_HORIZON_OUT", &target)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(target.join("ladder.json").exists());
    assert!(!dir.path().join("ignored-dir").exists());
}
