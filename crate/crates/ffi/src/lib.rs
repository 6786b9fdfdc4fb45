//! C ABI over `toric-minres`.
//!
//! A session is created from an input document (the same JSON the CLI
//! reads) and owns the stratification, the HHL complex and, once
//! requested, the minimal resolution. Every function returns a
//! [`TmStatus`]; on failure the message is available from
//! [`tm_last_error`] until the next call on the same thread. Strings
//! handed out by the library are freed with [`tm_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use libc::{c_char, size_t};
use toric_minres::cli::input::{parse_input, parse_matrix, InputSpec};
use toric_minres::cli::run::{analyze, CliError, Stage};
use toric_minres::hhl::HhlComplex;
use toric_minres::hpl::MinimalResolution;
use toric_minres::pinv::mp_inverse;
use toric_minres::ratlin::fmt_rational;

/// Status codes. Values 2 to 5 match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TmStatus {
    Ok = 0,
    Internal = 1,
    Parse = 2,
    Validation = 3,
    NoPositiveGrading = 4,
    Verification = 5,
    NullArgument = 6,
    OutOfRange = 7,
}

/// Opaque session handle.
pub struct TmSession {
    spec: InputSpec,
    hhl: HhlComplex,
    resolution: Option<MinimalResolution>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: TmStatus, message: &str) -> TmStatus {
    set_error(message);
    status
}

fn from_cli(e: &CliError) -> TmStatus {
    let status = match e.exit_code() {
        2 => TmStatus::Parse,
        3 => TmStatus::Validation,
        4 => TmStatus::NoPositiveGrading,
        5 => TmStatus::Verification,
        _ => TmStatus::Internal,
    };
    fail(status, &e.to_string())
}

/// Runs `f`, turning panics into [`TmStatus::Internal`].
fn guard(f: impl FnOnce() -> TmStatus) -> TmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(TmStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, TmStatus> {
    if p.is_null() {
        return Err(fail(TmStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(TmStatus::Parse, "input is not UTF-8"))
}

unsafe fn hand_out(text: String, out: *mut *mut c_char) -> TmStatus {
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            TmStatus::Ok
        }
        Err(_) => fail(TmStatus::Internal, "output contains a NUL byte"),
    }
}

/// Parses `json` and builds the stratification and HHL complex. Relative
/// paths in the options resolve against the current directory.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tm_session_from_json(json: *const c_char, out: *mut *mut TmSession) -> TmStatus {
    guard(|| {
        if out.is_null() {
            return fail(TmStatus::NullArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let spec = match parse_input(text, Path::new("")) {
            Ok(s) => s,
            Err(e) => return from_cli(&e.into()),
        };
        let hhl = match toric_minres::build_hhl_complex(&spec.quadruple) {
            Ok(h) => h,
            Err(e) => return from_cli(&e.into()),
        };
        *out = Box::into_raw(Box::new(TmSession { spec, hhl, resolution: None }));
        TmStatus::Ok
    })
}

/// # Safety
/// `session` must come from [`tm_session_from_json`] and not be used
/// afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tm_session_free(session: *mut TmSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

unsafe fn session_mut<'a>(s: *mut TmSession) -> Result<&'a mut TmSession, TmStatus> {
    s.as_mut().ok_or_else(|| fail(TmStatus::NullArgument, "null session"))
}

/// Writes the number of cells of each dimension `0..=k` into `counts`
/// (capacity `len`) and the torus dimension plus one into `written`.
///
/// # Safety
/// `counts` must have room for `len` values; `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tm_cell_counts(
    session: *mut TmSession,
    counts: *mut size_t,
    len: size_t,
    written: *mut size_t,
) -> TmStatus {
    guard(|| {
        let s = match session_mut(session) {
            Ok(s) => s,
            Err(e) => return e,
        };
        if counts.is_null() || written.is_null() {
            return fail(TmStatus::NullArgument, "null output pointer");
        }
        let c = s.hhl.strat.counts_by_dim();
        *written = c.len();
        if len < c.len() {
            return fail(TmStatus::OutOfRange, &format!("need room for {} counts", c.len()));
        }
        for (i, v) in c.iter().enumerate() {
            *counts.add(i) = *v;
        }
        TmStatus::Ok
    })
}

fn ensure_resolution(s: &mut TmSession) -> Result<&MinimalResolution, TmStatus> {
    if s.resolution.is_none() {
        let a = analyze(&s.spec, Stage::Minres, "minres").map_err(|e| from_cli(&e))?;
        if let Some(e) = &a.failure {
            return Err(from_cli(e));
        }
        s.resolution = a.resolution;
    }
    s.resolution.as_ref().ok_or_else(|| fail(TmStatus::Internal, "no resolution produced"))
}

/// Computes the minimal resolution with the options of the input.
///
/// # Safety
/// `session` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tm_minimal_resolution(session: *mut TmSession) -> TmStatus {
    guard(|| match session_mut(session) {
        Ok(s) => ensure_resolution(s).map(|_| TmStatus::Ok).unwrap_or_else(|e| e),
        Err(e) => e,
    })
}

/// Length of the minimal resolution (the torus dimension).
///
/// # Safety
/// `session` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tm_resolution_length(session: *mut TmSession, out: *mut size_t) -> TmStatus {
    guard(|| {
        if out.is_null() {
            return fail(TmStatus::NullArgument, "null output pointer");
        }
        match session_mut(session).and_then(ensure_resolution) {
            Ok(m) => {
                *out = m.complex.length();
                TmStatus::Ok
            }
            Err(e) => e,
        }
    })
}

/// Rank of the term in homological degree `degree`.
///
/// # Safety
/// `session` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tm_resolution_rank(session: *mut TmSession, degree: size_t, out: *mut size_t) -> TmStatus {
    guard(|| {
        if out.is_null() {
            return fail(TmStatus::NullArgument, "null output pointer");
        }
        match session_mut(session).and_then(ensure_resolution) {
            Ok(m) if degree <= m.complex.length() => {
                *out = m.complex.rank(degree);
                TmStatus::Ok
            }
            Ok(m) => fail(TmStatus::OutOfRange, &format!("degree {degree} exceeds length {}", m.complex.length())),
            Err(e) => e,
        }
    })
}

/// Entry `(row, col)` of `d_degree` in the canonical polynomial text
/// format. Free the string with [`tm_string_free`].
///
/// # Safety
/// `session` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tm_differential_entry(
    session: *mut TmSession,
    degree: size_t,
    row: size_t,
    col: size_t,
    out: *mut *mut c_char,
) -> TmStatus {
    guard(|| {
        if out.is_null() {
            return fail(TmStatus::NullArgument, "null output pointer");
        }
        let m = match session_mut(session).and_then(ensure_resolution) {
            Ok(m) => m,
            Err(e) => return e,
        };
        let c = &m.complex;
        if degree == 0 || degree > c.length() {
            return fail(TmStatus::OutOfRange, &format!("d_{degree} does not exist"));
        }
        let d = c.d(degree);
        if row >= d.rows() || col >= d.cols() {
            return fail(TmStatus::OutOfRange, &format!("d_{degree} is {}x{}", d.rows(), d.cols()));
        }
        hand_out(d.get(row, col).to_text(&c.variables), out)
    })
}

/// The full JSON report, as `toric-minres verify` prints it. Returns the
/// report even when a stage fails, together with that stage's status.
///
/// # Safety
/// `session` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tm_report_json(session: *mut TmSession, out: *mut *mut c_char) -> TmStatus {
    guard(|| {
        if out.is_null() {
            return fail(TmStatus::NullArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let s = match session_mut(session) {
            Ok(s) => s,
            Err(e) => return e,
        };
        let a = match analyze(&s.spec, Stage::Verify, "verify") {
            Ok(a) => a,
            Err(e) => return from_cli(&e),
        };
        let status = hand_out(a.report.to_json(), out);
        match &a.failure {
            Some(e) if status == TmStatus::Ok => from_cli(e),
            _ => status,
        }
    })
}

/// Moore-Penrose inverse of a JSON matrix (rows of integers or `"p/q"`
/// strings), returned in the same format.
///
/// # Safety
/// `matrix_json` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tm_mp_inverse_json(matrix_json: *const c_char, out: *mut *mut c_char) -> TmStatus {
    guard(|| {
        if out.is_null() {
            return fail(TmStatus::NullArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(matrix_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let a = match parse_matrix(text) {
            Ok(a) => a,
            Err(e) => return from_cli(&e.into()),
        };
        let rows: Vec<Vec<String>> = mp_inverse(&a).to_rows().iter().map(|r| r.iter().map(fmt_rational).collect()).collect();
        hand_out(serde_json::to_string(&rows).expect("matrix serializes"), out)
    })
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn tm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn tm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
