//! C ABI over the qlab library.
//!
//! Series cross the boundary as opaque `QlabSeries` handles; reports cross as JSON
//! strings owned by the library. Every function returns a [`QlabStatus`], and on
//! failure the message is kept per thread for [`qlab_last_error_message`].
//!
//! Strings returned through `char **` must be released with [`qlab_string_free`],
//! series with [`qlab_series_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qlab::congruence::{CongruenceClaim, Lab};
use qlab::expr::{parse, Evaluator};
use qlab::qproducts::dsome_gf_lambert;
use qlab::registry::Corpus;
use qlab::report::{Expectation, VerificationReport};
use qlab::{Error, Ring, Series};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ResourceLimit = 4,
    /// The check ran and found a counterexample; the report is still written.
    FailureFound = 5,
    InvalidArgument = 6,
    UnknownIdentity = 7,
    Internal = 8,
}

/// Opaque handle to a truncated series.
pub struct QlabSeries {
    inner: Series,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> QlabStatus {
    match e.root() {
        Error::Parse { .. } | Error::Corpus { .. } => QlabStatus::ParseError,
        Error::ResourceLimit(_) => QlabStatus::ResourceLimit,
        Error::UnknownIdentity(_) => QlabStatus::UnknownIdentity,
        _ => QlabStatus::InvalidArgument,
    }
}

fn fail(e: Error) -> QlabStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

/// Runs `f`, turning panics into `Internal`.
fn guard(f: impl FnOnce() -> QlabStatus) -> QlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            QlabStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, QlabStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(QlabStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        QlabStatus::InvalidUtf8
    })
}

fn ring(modulus: u64) -> Result<Ring, Error> {
    if modulus == 0 {
        Ok(Ring::ExactRational)
    } else {
        Ring::modular(modulus)
    }
}

unsafe fn put_series(out: *mut *mut QlabSeries, r: Result<Series, Error>) -> QlabStatus {
    match r {
        Ok(s) => {
            *out = Box::into_raw(Box::new(QlabSeries { inner: s }));
            QlabStatus::Ok
        }
        Err(e) => fail(e),
    }
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> QlabStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            QlabStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            QlabStatus::Internal
        }
    }
}

unsafe fn put_report(out: *mut *mut c_char, mut r: VerificationReport) -> QlabStatus {
    r.elapsed = None;
    let ok = r.as_expected();
    match serde_json::to_string(&r) {
        Ok(json) => match put_string(out, json) {
            QlabStatus::Ok if !ok => QlabStatus::FailureFound,
            s => s,
        },
        Err(e) => {
            set_error(e.to_string());
            QlabStatus::Internal
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failing call on this thread, or NULL. Valid until the next call that fails.
#[no_mangle]
pub extern "C" fn qlab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Expand `expr` to `n` coefficients, exactly when `modulus` is 0 and modulo `modulus` otherwise.
///
/// # Safety
/// `expr` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlab_expand(
    expr: *const c_char,
    n: usize,
    modulus: u64,
    out: *mut *mut QlabSeries,
) -> QlabStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return QlabStatus::NullPointer;
        }
        let expr = match text(expr) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let r = ring(modulus).and_then(|ring| Evaluator::new(ring).eval(&parse(expr)?, n));
        put_series(out, r)
    })
}

/// DSOME(0..n-1) through the Lambert pipeline.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlab_dsome_series(n: usize, modulus: u64, out: *mut *mut QlabSeries) -> QlabStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return QlabStatus::NullPointer;
        }
        put_series(out, ring(modulus).and_then(|r| dsome_gf_lambert(n, r)))
    })
}

/// Number of coefficients held, 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qlab_series_len(s: *const QlabSeries) -> usize {
    s.as_ref().map_or(0, |s| s.inner.precision())
}

/// Modulus of the coefficient ring, 0 for exact series and for NULL.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qlab_series_modulus(s: *const QlabSeries) -> u64 {
    s.as_ref().and_then(|s| s.inner.ring().modulus()).unwrap_or(0)
}

/// Coefficient `i` as a signed 64-bit integer.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlab_series_coeff_i64(s: *const QlabSeries, i: usize, out: *mut i64) -> QlabStatus {
    guard(|| {
        let Some(s) = s.as_ref() else {
            set_error("null series");
            return QlabStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return QlabStatus::NullPointer;
        }
        if i >= s.inner.precision() {
            set_error(format!("index {i} outside precision {}", s.inner.precision()));
            return QlabStatus::InvalidArgument;
        }
        match s.inner.coeff(i).to_i64() {
            Some(v) => {
                *out = v;
                QlabStatus::Ok
            }
            None => {
                set_error(format!("coefficient {i} is not an integer in i64 range"));
                QlabStatus::InvalidArgument
            }
        }
    })
}

/// Coefficient `i` as decimal text (`p/q` for non-integral rationals).
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlab_series_coeff_string(s: *const QlabSeries, i: usize, out: *mut *mut c_char) -> QlabStatus {
    guard(|| {
        let Some(s) = s.as_ref() else {
            set_error("null series");
            return QlabStatus::NullPointer;
        };
        if out.is_null() {
            set_error("null output pointer");
            return QlabStatus::NullPointer;
        }
        if i >= s.inner.precision() {
            set_error(format!("index {i} outside precision {}", s.inner.precision()));
            return QlabStatus::InvalidArgument;
        }
        put_string(out, s.inner.coeff(i).to_string())
    })
}

/// # Safety
/// `s` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qlab_series_free(s: *mut QlabSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Verify one built-in identity. `precision` 0 means the record's default.
/// Writes the JSON report and returns `FailureFound` when the outcome is not the expected one.
///
/// # Safety
/// `id` must be a NUL-terminated string and `report_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlab_verify_identity(
    id: *const c_char,
    precision: usize,
    report_json: *mut *mut c_char,
) -> QlabStatus {
    guard(|| {
        if report_json.is_null() {
            set_error("null output pointer");
            return QlabStatus::NullPointer;
        }
        let id = match text(id) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Corpus::builtin().verify(id, (precision > 0).then_some(precision)) {
            Ok(r) => put_report(report_json, r),
            Err(e) => fail(e),
        }
    })
}

/// Check a claim such as `DSOME[25n+6] == 0 mod 4` for `n <= n_max`.
///
/// # Safety
/// `claim` must be a NUL-terminated string and `report_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlab_check_claim(
    claim: *const c_char,
    n_max: usize,
    report_json: *mut *mut c_char,
) -> QlabStatus {
    guard(|| {
        if report_json.is_null() {
            set_error("null output pointer");
            return QlabStatus::NullPointer;
        }
        let text = match text(claim) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let claim = match CongruenceClaim::parse(text) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        match Lab::new().check_claim(&claim, n_max) {
            Ok(status) => {
                let r = VerificationReport {
                    id: text.trim().to_string(),
                    precision: n_max,
                    status,
                    anchor: String::new(),
                    expected: Expectation::Holds,
                    elapsed: None,
                };
                put_report(report_json, r)
            }
            Err(e) => fail(e),
        }
    })
}

/// Verify the whole built-in corpus; writes a JSON array of reports.
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qlab_verify_all_json(precision: usize, out_json: *mut *mut c_char) -> QlabStatus {
    guard(|| {
        if out_json.is_null() {
            set_error("null output pointer");
            return QlabStatus::NullPointer;
        }
        let mut reports = Corpus::builtin().verify_all((precision > 0).then_some(precision), true);
        let all_ok = reports.iter().all(|r| r.as_expected());
        for r in &mut reports {
            r.elapsed = None;
        }
        let json = match serde_json::to_string(&reports) {
            Ok(j) => j,
            Err(e) => {
                set_error(e.to_string());
                return QlabStatus::Internal;
            }
        };
        match put_string(out_json, json) {
            QlabStatus::Ok if !all_ok => QlabStatus::FailureFound,
            s => s,
        }
    })
}
