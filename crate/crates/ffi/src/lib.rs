//! C interface to rnsym.
//!
//! A problem is loaded once from JSON into an opaque [`RnsProblem`] handle.
//! Commands are requested with a small JSON object and answer with the JSON
//! report the `rnsym --json` binary prints:
//!
//! ```json
//! {"command": "bracket", "kind": "ham", "args": ["hx", "hy"], "caps": 3}
//! ```
//!
//! Every function returns an [`RnsStatus`]. On `RNS_STATUS_INPUT_ERROR` and
//! the other error codes, `rns_last_error` describes the failure. Strings handed
//! out by the library are freed with `rns_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde::Deserialize;

use rnsym::commands::{run, Command};
use rnsym::problem::Problem;
use rnsym::Error;

/// Result codes. The first three match the `rnsym` exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RnsStatus {
    /// Every requested check passed.
    Ok = 0,
    /// The report was produced and at least one check failed.
    CheckFailed = 1,
    /// Malformed problem or request.
    InputError = 2,
    NullArgument = 3,
    InvalidUtf8 = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
}

/// A loaded problem. Opaque to C.
pub struct RnsProblem {
    problem: Problem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Runs `f`, translating panics into `RNS_STATUS_PANIC`.
fn guard(f: impl FnOnce() -> RnsStatus) -> RnsStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned());
            set_error(format!("internal panic: {}", msg.unwrap_or_else(|| "unknown".into())));
            RnsStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, RnsStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(RnsStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        RnsStatus::InvalidUtf8
    })
}

fn input_error(e: Error) -> RnsStatus {
    set_error(e.to_string());
    RnsStatus::InputError
}

#[derive(Deserialize)]
#[serde(tag = "command", rename_all = "snake_case", deny_unknown_fields)]
enum Request {
    Verify {
        #[serde(default)]
        caps: Option<u32>,
    },
    Cohomology {
        which: String,
        #[serde(default)]
        max_degree: Option<i32>,
        #[serde(default)]
        caps: Option<u32>,
    },
    Bracket {
        kind: String,
        args: Vec<String>,
        #[serde(default)]
        bhr: bool,
        #[serde(default)]
        caps: Option<u32>,
    },
    Lift {
        mode: String,
        #[serde(default)]
        caps: Option<u32>,
    },
}

impl Request {
    fn into_command(self) -> rnsym::Result<(Command, Option<u32>)> {
        Ok(match self {
            Request::Verify { caps } => (Command::Verify, caps),
            Request::Cohomology { which, max_degree, caps } => (Command::Cohomology { which: which.parse()?, max_degree }, caps),
            Request::Bracket { kind, args, bhr, caps } => (Command::Bracket { kind: kind.parse()?, args, bhr }, caps),
            Request::Lift { mode, caps } => (Command::Lift { mode: mode.parse()? }, caps),
        })
    }
}

/// Loads a problem from a NUL-terminated JSON string. On success `*out`
/// receives a handle to release with `rns_problem_free`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rns_problem_from_json(json: *const c_char, out: *mut *mut RnsProblem) -> RnsStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return RnsStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let src = match read_str(json) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match Problem::from_json(src) {
            Ok(problem) => {
                *out = Box::into_raw(Box::new(RnsProblem { problem }));
                RnsStatus::Ok
            }
            Err(e) => input_error(e),
        }
    })
}

/// Releases a problem handle. Null is ignored.
///
/// # Safety
/// `p` must come from `rns_problem_from_json` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rns_problem_free(p: *mut RnsProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Runs a JSON request against a problem. When the status is `RNS_STATUS_OK`
/// or `RNS_STATUS_CHECK_FAILED`, `*report_json` receives the report, to be
/// released with `rns_string_free`; otherwise it is set to null.
///
/// # Safety
/// `p` must be a live handle, `request` a valid NUL-terminated string and
/// `report_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rns_run(p: *const RnsProblem, request: *const c_char, report_json: *mut *mut c_char) -> RnsStatus {
    guard(|| {
        if p.is_null() || report_json.is_null() {
            set_error("null handle or output pointer");
            return RnsStatus::NullArgument;
        }
        *report_json = ptr::null_mut();
        let src = match read_str(request) {
            Ok(s) => s,
            Err(s) => return s,
        };
        let req: Request = match serde_json::from_str(src) {
            Ok(r) => r,
            Err(e) => return input_error(Error::Input(format!("invalid request: {e}"))),
        };
        let (cmd, caps) = match req.into_command() {
            Ok(c) => c,
            Err(e) => return input_error(e),
        };
        match run(&(*p).problem, &cmd, caps) {
            Ok(report) => {
                let status = if report.passed() { RnsStatus::Ok } else { RnsStatus::CheckFailed };
                *report_json = CString::new(report.to_json()).expect("JSON has no NUL").into_raw();
                status
            }
            Err(e) => input_error(e),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rns_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The last error message on this thread, or null. Valid until the next call
/// into the library from the same thread; do not free.
#[no_mangle]
pub extern "C" fn rns_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static name of a status code, e.g. `"check_failed"`.
#[no_mangle]
pub extern "C" fn rns_status_name(status: RnsStatus) -> *const c_char {
    let s: &'static CStr = match status {
        RnsStatus::Ok => c"ok",
        RnsStatus::CheckFailed => c"check_failed",
        RnsStatus::InputError => c"input_error",
        RnsStatus::NullArgument => c"null_argument",
        RnsStatus::InvalidUtf8 => c"invalid_utf8",
        RnsStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn rns_version() -> *const c_char {
    const V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version has no interior NUL"),
    };
    V.as_ptr()
}
