use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use rnsym_ffi::*;

const ROTATION: &str = include_str!("../../../docs/examples/symplectic_rotation.json");
const TORUS: &str = include_str!("../../../docs/examples/torus_theta.json");

fn load(src: &str) -> *mut RnsProblem {
    let json = CString::new(src).unwrap();
    let mut p = ptr::null_mut();
    let st = unsafe { rns_problem_from_json(json.as_ptr(), &mut p) };
    assert_eq!(st, RnsStatus::Ok);
    assert!(!p.is_null());
    p
}

fn call(p: *const RnsProblem, req: &str) -> (RnsStatus, Option<serde_json::Value>) {
    let req = CString::new(req).unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { rns_run(p, req.as_ptr(), &mut out) };
    if out.is_null() {
        return (st, None);
    }
    let v = serde_json::from_str(unsafe { CStr::from_ptr(out) }.to_str().unwrap()).unwrap();
    unsafe { rns_string_free(out) };
    (st, Some(v))
}

fn last_error() -> String {
    let e = rns_last_error();
    assert!(!e.is_null());
    unsafe { CStr::from_ptr(e) }.to_string_lossy().into_owned()
}

#[test]
fn statuses_follow_verdicts() {
    let p = load(ROTATION);
    let (st, r) = call(p, r#"{"command": "lift", "mode": "strict"}"#);
    assert_eq!(st, RnsStatus::Ok);
    assert_eq!(r.unwrap()["checks"][0]["pass"], true);
    let (st, r) = call(p, r#"{"command": "bracket", "kind": "ham", "args": ["hx", "hy"]}"#);
    assert_eq!(st, RnsStatus::Ok);
    assert_eq!(r.unwrap()["data"]["result"], "1*dt");
    unsafe { rns_problem_free(p) };

    let p = load(TORUS);
    let (st, r) = call(p, r#"{"command": "lift", "mode": "strict"}"#);
    assert_eq!(st, RnsStatus::CheckFailed);
    assert_eq!(r.unwrap()["checks"][0]["pass"], false);
    let (st, r) = call(p, r#"{"command": "lift", "mode": "leibniz", "caps": 1}"#);
    assert_eq!(st, RnsStatus::Ok);
    let r = r.unwrap();
    assert_eq!(r["data"]["constants"], serde_json::json!([["2"]]));
    assert_eq!(r["data"]["cap"], 1);
    unsafe { rns_problem_free(p) };
}

#[test]
fn input_errors_set_last_error() {
    let bad = CString::new(r#"{"model": {"builtin": "affine", "m": 2}, "bundle": {"n": 1, "H": "dx dq"}}"#).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { rns_problem_from_json(bad.as_ptr(), &mut p) }, RnsStatus::Ok);
    let (st, r) = call(p, r#"{"command": "verify"}"#);
    assert_eq!((st, r), (RnsStatus::InputError, None));
    assert!(last_error().contains("bundle.H"), "{}", last_error());

    let (st, _) = call(p, r#"{"command": "lift", "mode": "sideways"}"#);
    assert_eq!(st, RnsStatus::InputError);
    assert!(last_error().contains("sideways"));
    let (st, _) = call(p, r#"{"command": "teleport"}"#);
    assert_eq!(st, RnsStatus::InputError);
    unsafe { rns_problem_free(p) };

    let junk = CString::new("{ not json").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { rns_problem_from_json(junk.as_ptr(), &mut p) }, RnsStatus::InputError);
    assert!(p.is_null());
}

#[test]
fn null_and_utf8_arguments() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { rns_problem_from_json(ptr::null(), &mut p) }, RnsStatus::NullArgument);
    let src = CString::new(ROTATION).unwrap();
    assert_eq!(unsafe { rns_problem_from_json(src.as_ptr(), ptr::null_mut()) }, RnsStatus::NullArgument);
    let mut out = ptr::null_mut();
    let req = CString::new(r#"{"command": "verify"}"#).unwrap();
    assert_eq!(unsafe { rns_run(ptr::null(), req.as_ptr(), &mut out) }, RnsStatus::NullArgument);

    let bytes = [0xffu8, 0xfe, 0];
    let st = unsafe { rns_problem_from_json(bytes.as_ptr().cast(), &mut p) };
    assert_eq!(st, RnsStatus::InvalidUtf8);
    unsafe {
        rns_problem_free(ptr::null_mut());
        rns_string_free(ptr::null_mut());
    }
}

#[test]
fn names_and_version() {
    let name = |s| unsafe { CStr::from_ptr(rns_status_name(s)) }.to_str().unwrap();
    assert_eq!(name(RnsStatus::CheckFailed), "check_failed");
    assert_eq!(name(RnsStatus::Panic), "panic");
    assert_eq!(unsafe { CStr::from_ptr(rns_version()) }.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/rnsym.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["rns_problem_from_json", "rns_run", "rns_problem_free", "rns_string_free", "rns_last_error", "RNS_STATUS_CHECK_FAILED = 1"] {
        assert!(text.contains(f), "header lacks {f}");
    }
    let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-std=c11", "-Wall", "-Werror", "-x", "c"]).arg(&header).output() else {
        eprintln!("no C compiler; skipping the syntax check");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_and_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    if !profile.join("librnsym_ffi.so").exists() {
        eprintln!("no shared library next to the test binary; skipping");
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("rns_smoke");
    let cc = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg("-L")
        .arg(&profile)
        .arg(format!("-Wl,-rpath,{}", profile.display()))
        .args(["-lrnsym_ffi", "-o"])
        .arg(&exe)
        .output();
    let Ok(cc) = cc else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(cc.status.success(), "{}", String::from_utf8_lossy(&cc.stderr));
    let run = Command::new(&exe).arg(dir.join("../../docs/examples/symplectic_rotation.json")).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok 1\ninput_error 1\n");
}
