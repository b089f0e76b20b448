use std::ffi::{CStr, CString};
use std::ptr;
use tt_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn text(r: *const TtReport) -> String {
    unsafe { CStr::from_ptr(tt_report_text(r)).to_str().unwrap().to_string() }
}

fn demo(file: &str) -> String {
    format!("{}/../core/demo/{file}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn check_round_trip() {
    let src = c("base A;\nconst a : A;\ncheck |- (lam (x : A) . x) a = a : A;\ncheck x : A |- x : A;\n");
    let mut s = ptr::null_mut();
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(tt_script_parse(ptr::null(), src.as_ptr(), &mut s), TtStatus::Ok);
        assert_eq!(tt_script_check_count(s), 2);
        assert_eq!(tt_check(s, false, &mut r), TtStatus::Ok);
        assert_eq!(tt_report_status(r), TtStatus::Ok);
        assert!(text(r).ends_with("RESULT PASS"));
        assert!(tt_last_error().is_null());
        tt_report_free(r);
        tt_script_free(s);
    }
}

#[test]
fn failures_set_last_error() {
    let mut s = ptr::null_mut();
    let mut r = ptr::null_mut();
    unsafe {
        let bad = c("base A;\ncheck |- x : A;\n");
        assert_eq!(tt_script_parse(c("bad").as_ptr(), bad.as_ptr(), &mut s), TtStatus::InputError);
        assert!(s.is_null());
        let msg = CStr::from_ptr(tt_last_error()).to_str().unwrap();
        assert!(msg.contains("bad:2:10"), "{msg}");

        let ill = c("base A;\nbase B;\nconst a : A;\ncheck |- a : B;\n");
        assert_eq!(tt_script_parse(ptr::null(), ill.as_ptr(), &mut s), TtStatus::Ok);
        assert_eq!(tt_check(s, true, &mut r), TtStatus::CheckFailed);
        assert!(text(r).contains("FAIL"));
        tt_report_free(r);
        tt_script_free(s);

        assert_eq!(tt_check(ptr::null(), false, &mut r), TtStatus::NullPointer);
        assert_eq!(tt_script_parse(ptr::null(), ptr::null(), ptr::null_mut()), TtStatus::NullPointer);
        let invalid = [0xffu8, 0];
        assert_eq!(tt_script_parse(ptr::null(), invalid.as_ptr().cast(), &mut s), TtStatus::InvalidUtf8);
    }
}

#[test]
fn interp_demo_through_handles() {
    let mut s = ptr::null_mut();
    let mut m = ptr::null_mut();
    let mut r = ptr::null_mut();
    let src = c(&std::fs::read_to_string(demo("demo.tt")).unwrap());
    unsafe {
        assert_eq!(tt_script_parse(c("demo.tt").as_ptr(), src.as_ptr(), &mut s), TtStatus::Ok);
        assert_eq!(tt_model_load(c(&demo("model.json")).as_ptr(), &mut m), TtStatus::Ok);
        assert_eq!(tt_interp(s, m, &mut r), TtStatus::Ok);
        let t = text(r);
        assert!(t.contains("Pi (b : B) . X b type :: 6 objects"), "{t}");
        tt_report_free(r);
        assert_eq!(tt_model_load(c("/nonexistent.json").as_ptr(), &mut m), TtStatus::InputError);
        assert!(m.is_null());
        tt_script_free(s);
    }
}

#[test]
fn modelcheck_and_sset() {
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(tt_modelcheck(c("finset-discrete").as_ptr(), 0, 2, &mut r), TtStatus::Ok);
        assert!(text(r).starts_with("# modelcheck engine=finset-discrete seed=0 size=2"));
        tt_report_free(r);
        assert_eq!(tt_modelcheck(c("nope").as_ptr(), 0, 2, &mut r), TtStatus::InputError);
        tt_report_free(r);
        let (f, p) = (c(&demo("f.json")), c(&demo("sp.json")));
        assert_eq!(tt_sset_pi(f.as_ptr(), p.as_ptr(), 1, &mut r), TtStatus::Ok);
        assert!(text(r).contains("Pi levels [6, 6]"));
        tt_report_free(r);
        assert!(!tt_version().is_null());
    }
}

/// Compiles a C program against the generated header and the static
/// library.
#[test]
fn c_program_links_against_header() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::var("CARGO_TARGET_DIR")
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|_| root.join("../../target"))
        .join("debug");
    let lib = target.join("libtt_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let exe = tempfile::tempdir().unwrap();
    let bin = exe.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = std::process::Command::new(cc)
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = std::process::Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok 0.1.0"));
}
