//! C ABI over `tt-core`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. Every fallible call returns a [`TtStatus`];
//! on anything but `TT_STATUS_OK` a message is available from
//! [`tt_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use tt_core::cli::{self, Report, Status};
use tt_core::semantics::ModelEnv;
use tt_core::syntax::{parse_script, Statement};

/// Status codes. The first three match the `tt` exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TtStatus {
    Ok = 0,
    CheckFailed = 1,
    InputError = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    Panic = 5,
}

/// A parsed script.
pub struct TtScript {
    name: String,
    text: String,
    checks: usize,
}

/// A model environment binding base types and constants.
pub struct TtModel {
    name: String,
    env: ModelEnv,
}

/// A finished report.
pub struct TtReport {
    status: TtStatus,
    text: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(TtStatus, String);

type Res<T> = Result<T, Fail>;

/// Runs `f`, turning errors and panics into a status.
fn guard(f: impl FnOnce() -> Res<TtStatus>) -> TtStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            TtStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(Fail(TtStatus::NullPointer, format!("`{what}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(TtStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

fn out_arg<T>(out: *mut *mut T) -> Res<()> {
    if out.is_null() {
        return Err(Fail(TtStatus::NullPointer, "output pointer is null".into()));
    }
    Ok(())
}

unsafe fn emit(r: Report, out: *mut *mut TtReport) -> Res<TtStatus> {
    let status = match r.status {
        Status::Pass => TtStatus::Ok,
        Status::Fail => TtStatus::CheckFailed,
        Status::InputError => TtStatus::InputError,
    };
    if status != TtStatus::Ok {
        set_error(r.text.clone());
    }
    let text = CString::new(r.text.replace('\0', " ")).unwrap_or_default();
    *out = Box::into_raw(Box::new(TtReport { status, text }));
    Ok(status)
}

/// Parses `text`. `name` labels locations in reports and may be null.
///
/// # Safety
/// `text` and `name` are null or NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_script_parse(name: *const c_char, text: *const c_char, out: *mut *mut TtScript) -> TtStatus {
    guard(|| {
        out_arg(out)?;
        *out = ptr::null_mut();
        let name = if name.is_null() { "<script>" } else { str_arg(name, "name")? };
        let text = str_arg(text, "text")?;
        let script = parse_script(text).map_err(|e| Fail(TtStatus::InputError, format!("{name}:{e}")))?;
        let checks = script.statements.iter().filter(|s| matches!(s.item, Statement::Check { .. })).count();
        *out = Box::into_raw(Box::new(TtScript {
            name: name.to_string(),
            text: text.to_string(),
            checks,
        }));
        Ok(TtStatus::Ok)
    })
}

/// Number of `check` statements.
///
/// # Safety
/// `script` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tt_script_check_count(script: *const TtScript) -> usize {
    script.as_ref().map_or(0, |s| s.checks)
}

/// # Safety
/// `script` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tt_script_free(script: *mut TtScript) {
    if !script.is_null() {
        drop(Box::from_raw(script));
    }
}

/// Loads a model environment from a JSON file; relative paths inside it
/// resolve against the file's directory.
///
/// # Safety
/// `path` is null or NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_model_load(path: *const c_char, out: *mut *mut TtModel) -> TtStatus {
    guard(|| {
        out_arg(out)?;
        *out = ptr::null_mut();
        let path = str_arg(path, "path")?;
        let env = ModelEnv::load(Path::new(path)).map_err(|e| Fail(TtStatus::InputError, e.to_string()))?;
        *out = Box::into_raw(Box::new(TtModel {
            name: path.to_string(),
            env,
        }));
        Ok(TtStatus::Ok)
    })
}

/// # Safety
/// `model` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tt_model_free(model: *mut TtModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Typechecks every judgement of the script.
///
/// # Safety
/// `script` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_check(script: *const TtScript, keep_going: bool, out: *mut *mut TtReport) -> TtStatus {
    guard(|| {
        out_arg(out)?;
        *out = ptr::null_mut();
        let s = script.as_ref().ok_or_else(|| Fail(TtStatus::NullPointer, "`script` is null".into()))?;
        emit(cli::check_source(&s.name, &s.text, keep_going), out)
    })
}

/// Interprets the script in the model and checks soundness.
///
/// # Safety
/// `script` and `model` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_interp(script: *const TtScript, model: *const TtModel, out: *mut *mut TtReport) -> TtStatus {
    guard(|| {
        out_arg(out)?;
        *out = ptr::null_mut();
        let s = script.as_ref().ok_or_else(|| Fail(TtStatus::NullPointer, "`script` is null".into()))?;
        let m = model.as_ref().ok_or_else(|| Fail(TtStatus::NullPointer, "`model` is null".into()))?;
        emit(cli::interp_source(&s.name, &s.text, &m.name, &m.env), out)
    })
}

/// Runs a model-check engine: `gpd`, `finset-minimal` or `finset-discrete`.
///
/// # Safety
/// `engine` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_modelcheck(engine: *const c_char, seed: u64, size: usize, out: *mut *mut TtReport) -> TtStatus {
    guard(|| {
        out_arg(out)?;
        *out = ptr::null_mut();
        let engine = str_arg(engine, "engine")?;
        emit(cli::cmd_modelcheck(engine, seed, size), out)
    })
}

/// Π of the map in `p_path` along the map in `f_path`. A negative `trunc`
/// keeps the truncation of the files.
///
/// # Safety
/// Paths are NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_sset_pi(
    f_path: *const c_char,
    p_path: *const c_char,
    trunc: i32,
    out: *mut *mut TtReport,
) -> TtStatus {
    guard(|| {
        out_arg(out)?;
        *out = ptr::null_mut();
        let f = str_arg(f_path, "f_path")?;
        let p = str_arg(p_path, "p_path")?;
        let trunc = usize::try_from(trunc).ok();
        emit(cli::cmd_sset_pi(Path::new(f), Path::new(p), trunc), out)
    })
}

/// The status the report was produced with.
///
/// # Safety
/// `report` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tt_report_status(report: *const TtReport) -> TtStatus {
    report.as_ref().map_or(TtStatus::NullPointer, |r| r.status)
}

/// The report text, owned by the handle.
///
/// # Safety
/// `report` is null or a live handle. The pointer dies with the handle.
#[no_mangle]
pub unsafe extern "C" fn tt_report_text(report: *const TtReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.text.as_ptr())
}

/// # Safety
/// `report` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tt_report_free(report: *mut TtReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// The message for the last failed call on this thread, or null. Valid
/// until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn tt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn tt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
