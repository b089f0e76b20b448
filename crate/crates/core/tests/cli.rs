//! The `tt` binary end to end: exit codes, report contents, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn demo(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("demo").join(file)
}

fn tt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tt"))
        .args(args)
        .env("TT_COLOR", "0")
        .output()
        .expect("tt runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn script(text: &str) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.tt");
    std::fs::write(&p, text).unwrap();
    (dir, p.display().to_string())
}

#[test]
fn check_pi_comp_script() {
    let (_d, p) = script("base A;\nbase B (x : A);\nconst a : A;\nconst b : B a;\ncheck |- (lam (x : A) . x) a = a : A;\n");
    let o = tt(&["check", &p]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("RESULT PASS\n"));
}

#[test]
fn check_unbound_variable_is_an_input_error() {
    let (_d, p) = script("base A;\ncheck |- y : A;\n");
    let o = tt(&["check", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:10: unbound variable `y`"));
}

#[test]
fn check_empty_script() {
    let (_d, p) = script("");
    assert_eq!(tt(&["check", &p]).status.code(), Some(0));
}

#[test]
fn check_stops_unless_keep_going() {
    let (_d, p) = script("base A;\nbase B;\nconst a : A;\ncheck |- a : B;\ncheck |- a : B;\ncheck |- a : A;\n");
    let first = tt(&["check", &p]);
    assert_eq!(first.status.code(), Some(1));
    assert_eq!(stdout(&first).matches("FAIL").count(), 2, "one failing check plus the result line");
    let all = tt(&["check", "--keep-going", &p]);
    assert_eq!(all.status.code(), Some(1));
    let out = stdout(&all);
    assert_eq!(out.lines().filter(|l| l.starts_with("FAIL")).count(), 2);
    assert!(out.contains("checked 1 of 3 judgements"));
}

#[test]
fn missing_file_is_an_input_error() {
    assert_eq!(tt(&["check", "/nonexistent/s.tt"]).status.code(), Some(2));
}

#[test]
fn interp_demo_reports_pi_of_size_six() {
    let o = tt(&["interp", demo("demo.tt").to_str().unwrap(), "--model", demo("model.json").to_str().unwrap()]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("|- Pi (b : B) . X b type :: 6 objects"), "{out}");
    assert!(out.contains("|- Sigma (b : B) . X b type :: 5 objects"));
    assert!(out.contains("(lam (b : B) . b) c = c : B :: SOUND"));
    assert!(out.lines().any(|l| l.starts_with("comparisons: ")));
}

#[test]
fn interp_json_mirror() {
    let o = tt(&["interp", demo("demo.tt").to_str().unwrap(), "--model", demo("model.json").to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"], "PASS");
    assert_eq!(v["judgements"][0]["objects"], 6);
    assert!(v["judgements"].as_array().unwrap().iter().any(|j| j["verdict"] == "SOUND"));
}

#[test]
fn interp_rejects_nat() {
    let (_d, p) = script("base Nat;\ncheck |- Nat type;\n");
    let o = tt(&["interp", &p, "--model", demo("model.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`Nat` has no finite model"));
}

#[test]
fn interp_reports_missing_binding() {
    let (_d, p) = script("base C;\ncheck |- C type;\n");
    let o = tt(&["interp", &p, "--model", demo("model.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`C` has no binding"));
}

#[test]
fn modelcheck_engines_pass() {
    for args in [
        &["modelcheck", "gpd", "--seed", "0", "--size", "3"][..],
        &["modelcheck", "finset-minimal", "--size", "4"],
        &["modelcheck", "finset-discrete", "--size", "3"],
    ] {
        let o = tt(args);
        let out = stdout(&o);
        assert_eq!(o.status.code(), Some(0), "{args:?}\n{out}");
        assert!(out.ends_with("RESULT PASS\n"));
    }
    assert_eq!(tt(&["modelcheck", "cat"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let a = tt(&["modelcheck", "finset-discrete", "--seed", "5", "--size", "2"]);
    let b = tt(&["modelcheck", "finset-discrete", "--seed", "5", "--size", "2"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("# modelcheck engine=finset-discrete seed=5 size=2\n"));
    let i = |_: ()| tt(&["interp", demo("demo.tt").to_str().unwrap(), "--model", demo("model.json").to_str().unwrap()]);
    assert_eq!(i(()).stdout, i(()).stdout);
}

#[test]
fn report_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let rp = dir.path().join("r.txt");
    let o = tt(&["modelcheck", "finset-discrete", "--size", "2", "--report", rp.to_str().unwrap()]);
    assert_eq!(std::fs::read(&rp).unwrap(), o.stdout);
}

#[test]
fn sset_pi_discrete() {
    let o = tt(&["sset", "pi", demo("f.json").to_str().unwrap(), demo("sp.json").to_str().unwrap()]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("Pi levels [6, 6, 6]"));
    assert!(out.contains("PASS adjunction over id: 6 = 6"));
    let t = tt(&["sset", "pi", demo("f.json").to_str().unwrap(), demo("sp.json").to_str().unwrap(), "--trunc", "1"]);
    assert!(stdout(&t).contains("Pi levels [6, 6]"));
    let up = tt(&["sset", "pi", demo("f.json").to_str().unwrap(), demo("sp.json").to_str().unwrap(), "--trunc", "5"]);
    assert_eq!(up.status.code(), Some(2));
}

#[test]
fn color_only_when_asked() {
    let (_d, p) = script("");
    let o = Command::new(env!("CARGO_BIN_EXE_tt")).args(["check", &p]).env("TT_COLOR", "1").output().unwrap();
    assert!(stdout(&o).contains("\x1b[32mPASS\x1b[0m"));
    assert!(!stdout(&tt(&["check", &p])).contains('\x1b'));
}
