//! C interface. Objects cross the boundary as opaque handles that the
//! caller releases with the matching `_free` function; strings returned by
//! the library are released with `robin_string_free`. Every fallible call
//! returns a `RobinError` and leaves a message for
//! `robin_last_error_message` on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use robin::criterion::{self, CertificateReport, CertificateStatus, CertifyOptions};
use robin::factorization::Factorization;
use robin::inequality::{self, Verdict};
use robin::report::CertifyResult;
use robin::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RobinError {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    CapExceeded = 4,
    PrecisionLimit = 5,
    Overflow = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RobinVerdict {
    Holds = 0,
    Fails = 1,
    Indeterminate = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RobinCertificateStatus {
    Certified = 0,
    NoWitness = 1,
    PreconditionUnmet = 2,
    Indeterminate = 3,
}

/// Opaque generalized factorization.
pub struct RobinFactorization(Factorization);

/// Opaque certification result.
pub struct RobinCertificate(CertificateReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn code_of(e: &Error) -> RobinError {
    match e {
        Error::CapExceeded { .. } | Error::SegmentTooLarge { .. } => RobinError::CapExceeded,
        Error::StraddlesInteger { .. } | Error::Indeterminate(_) | Error::PrecisionOutOfRange { .. } => {
            RobinError::PrecisionLimit
        }
        Error::Overflow(_) | Error::SigmaOverflow { .. } => RobinError::Overflow,
        Error::AuditFailed { .. } | Error::DivisionByZero | Error::Io(_) => RobinError::Internal,
        _ => RobinError::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), RobinError>) -> RobinError {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RobinError::Ok,
        Ok(Err(code)) => code,
        Err(_) => {
            set_last_error("panic inside the robin library".into());
            RobinError::Panic
        }
    }
}

fn fail(e: Error) -> RobinError {
    let code = code_of(&e);
    set_last_error(e.to_string());
    code
}

fn null(what: &str) -> RobinError {
    set_last_error(format!("{what} is null"));
    RobinError::NullPointer
}

fn into_c_string(s: String, out: *mut *mut c_char) -> Result<(), RobinError> {
    let c = CString::new(s).map_err(|_| {
        set_last_error("string contains a NUL byte".into());
        RobinError::Internal
    })?;
    // SAFETY: callers check `out` for null before getting here.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn robin_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn robin_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn robin_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a factorization in text form (`p e` and `seg lo hi e` lines).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn robin_factorization_parse(
    text: *const c_char,
    out: *mut *mut RobinFactorization,
) -> RobinError {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| {
            set_last_error("text is not valid UTF-8".into());
            RobinError::InvalidUtf8
        })?;
        let f: Factorization = s.parse().map_err(fail)?;
        *out = Box::into_raw(Box::new(RobinFactorization(f)));
        Ok(())
    })
}

/// Builds a factorization from parallel arrays of primes and exponents.
///
/// # Safety
/// `primes` and `exponents` must each point to `len` readable values
/// (they may be NULL when `len` is 0) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn robin_factorization_from_pairs(
    primes: *const u64,
    exponents: *const u64,
    len: usize,
    out: *mut *mut RobinFactorization,
) -> RobinError {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if len > 0 && (primes.is_null() || exponents.is_null()) {
            return Err(null("primes or exponents"));
        }
        let pairs = if len == 0 {
            Vec::new()
        } else {
            let ps = std::slice::from_raw_parts(primes, len);
            let es = std::slice::from_raw_parts(exponents, len);
            ps.iter().copied().zip(es.iter().copied()).collect()
        };
        let f = Factorization::from_pairs(pairs).map_err(fail)?;
        *out = Box::into_raw(Box::new(RobinFactorization(f)));
        Ok(())
    })
}

/// Canonical text form of `f`; free the result with `robin_string_free`.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn robin_factorization_to_string(
    f: *const RobinFactorization,
    out: *mut *mut c_char,
) -> RobinError {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("factorization"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        into_c_string(f.0.to_text(), out)
    })
}

/// # Safety
/// `f` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn robin_factorization_free(f: *mut RobinFactorization) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Decides σ(n) < e^γ n log log n for `n ≥ 3`. `sigma` may be NULL.
///
/// # Safety
/// `verdict` must be a valid pointer; `sigma` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn robin_check(n: u64, verdict: *mut RobinVerdict, sigma: *mut u64) -> RobinError {
    guard(|| {
        if verdict.is_null() {
            return Err(null("verdict"));
        }
        let r = inequality::check_ri(n).map_err(fail)?;
        *verdict = match r.verdict {
            Verdict::Holds => RobinVerdict::Holds,
            Verdict::Fails => RobinVerdict::Fails,
            Verdict::Indeterminate => RobinVerdict::Indeterminate,
        };
        if !sigma.is_null() {
            *sigma = r.sigma;
        }
        Ok(())
    })
}

/// E(p) = ⌊−log T / log p⌋.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn robin_exponent_threshold(p: u64, out: *mut u64) -> RobinError {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = criterion::exponent_threshold(p).map_err(fail)?;
        Ok(())
    })
}

/// Runs the witness-prime certification on `f`.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn robin_certify(
    f: *const RobinFactorization,
    assume_large: bool,
    with_s_exact: bool,
    out: *mut *mut RobinCertificate,
) -> RobinError {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("factorization"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let opts = CertifyOptions { assume_large, with_s_exact, ..CertifyOptions::default() };
        let report = criterion::certify(&f.0, &opts).map_err(fail)?;
        *out = Box::into_raw(Box::new(RobinCertificate(report)));
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn robin_certificate_status(c: *const RobinCertificate) -> RobinCertificateStatus {
    match c.as_ref().map(|c| c.0.status) {
        Some(CertificateStatus::Certified) => RobinCertificateStatus::Certified,
        Some(CertificateStatus::NoWitness) => RobinCertificateStatus::NoWitness,
        Some(CertificateStatus::PreconditionUnmet) => RobinCertificateStatus::PreconditionUnmet,
        Some(CertificateStatus::Indeterminate) | None => RobinCertificateStatus::Indeterminate,
    }
}

/// Writes the witness prime, its exponent in N and E(p). Returns false when
/// there is no witness; any output pointer may be NULL.
///
/// # Safety
/// `c` must be a live handle; output pointers must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn robin_certificate_witness(
    c: *const RobinCertificate,
    p: *mut u64,
    a: *mut u64,
    e: *mut u64,
) -> bool {
    let Some(w) = c.as_ref().and_then(|c| c.0.witness) else { return false };
    for (dst, v) in [(p, w.p), (a, w.a), (e, w.e)] {
        if !dst.is_null() {
            *dst = v;
        }
    }
    true
}

/// The full certificate as one JSON object; free with `robin_string_free`.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn robin_certificate_to_json(c: *const RobinCertificate, out: *mut *mut c_char) -> RobinError {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("certificate"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let json = serde_json::to_string(&CertifyResult::from(&c.0)).map_err(|e| {
            set_last_error(e.to_string());
            RobinError::Internal
        })?;
        into_c_string(json, out)
    })
}

/// # Safety
/// `c` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn robin_certificate_free(c: *mut RobinCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}
