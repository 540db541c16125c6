//! C ABI for the clausen engine.
//!
//! Every function returns an `i32` status (`CLAUSEN_OK` or a negative
//! error code) and writes results through out-pointers. Reports are opaque
//! handles released with `clausen_report_free`. The message of the most
//! recent error on the calling thread is available from
//! `clausen_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clausen::cli::{run_suite, RunConfig, Suite, SuiteReport};
use clausen::hypergeometric::{eval_2f1, eval_f2, AppellF2Params, Hyp2F1Params};
use clausen::identities::verify_multivariate_clausen;
use clausen::kummer::ModuliPoint;
use clausen::superelliptic::{period_closed, validate_signature, Cycle};
use clausen::Error;
use num_complex::Complex64;

pub const CLAUSEN_OK: i32 = 0;
/// a required pointer argument was null
pub const CLAUSEN_ERR_NULL: i32 = -1;
pub const CLAUSEN_ERR_ARGUMENT: i32 = -2;
pub const CLAUSEN_ERR_DOMAIN: i32 = -3;
/// quadrature, series or ODE did not converge
pub const CLAUSEN_ERR_NUMERIC: i32 = -4;
pub const CLAUSEN_ERR_VERIFICATION: i32 = -5;
pub const CLAUSEN_ERR_PANIC: i32 = -6;

/// Opaque verification report.
pub struct ClausenReport {
    inner: SuiteReport,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::ConstraintViolation { .. } => CLAUSEN_ERR_ARGUMENT,
        Error::VerificationFailed { .. } => CLAUSEN_ERR_VERIFICATION,
        e if e.is_domain() => CLAUSEN_ERR_DOMAIN,
        _ => CLAUSEN_ERR_NUMERIC,
    }
}

fn guard<F: FnOnce() -> Result<(), i32>>(f: F) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CLAUSEN_OK
        }
        Ok(Err(code)) => code,
        Err(_) => {
            set_error("panic inside the clausen engine");
            CLAUSEN_ERR_PANIC
        }
    }
}

fn lift<T>(r: clausen::Result<T>) -> Result<T, i32> {
    r.map_err(|e| {
        set_error(&e.to_string());
        code_of(&e)
    })
}

fn null() -> i32 {
    set_error("null pointer argument");
    CLAUSEN_ERR_NULL
}

unsafe fn put(z: Complex64, re: *mut f64, im: *mut f64) -> Result<(), i32> {
    if re.is_null() || im.is_null() {
        return Err(null());
    }
    *re = z.re;
    *im = z.im;
    Ok(())
}

fn make_report(inner: SuiteReport) -> Result<*mut ClausenReport, i32> {
    let text = serde_json::to_string(&inner).map_err(|e| {
        set_error(&e.to_string());
        CLAUSEN_ERR_NUMERIC
    })?;
    let json = CString::new(text).map_err(|_| CLAUSEN_ERR_NUMERIC)?;
    Ok(Box::into_raw(Box::new(ClausenReport { inner, json })))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn clausen_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last error on this thread; empty after a success. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn clausen_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// `2F1(a, b; c; z)`.
///
/// # Safety
/// `out_re` and `out_im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clausen_hyp2f1(
    a: f64,
    b: f64,
    c: f64,
    z_re: f64,
    z_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> i32 {
    guard(|| {
        let p = lift(Hyp2F1Params::real(a, b, c))?;
        let v = lift(eval_2f1(&p, Complex64::new(z_re, z_im)))?;
        put(v, out_re, out_im)
    })
}

/// Appell `F2(α; β1, β2; γ1, γ2; z1, z2)`.
///
/// # Safety
/// `out_re` and `out_im` must be valid for writes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn clausen_appell_f2(
    alpha: f64,
    beta1: f64,
    beta2: f64,
    gamma1: f64,
    gamma2: f64,
    z1_re: f64,
    z1_im: f64,
    z2_re: f64,
    z2_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> i32 {
    guard(|| {
        let p = lift(AppellF2Params::real(alpha, beta1, beta2, gamma1, gamma2))?;
        let v = lift(eval_f2(
            &p,
            Complex64::new(z1_re, z1_im),
            Complex64::new(z2_re, z2_im),
        ))?;
        put(v, out_re, out_im)
    })
}

/// Closed-form period over cycle `A` (`cycle = 0`) or `B` (`cycle = 1`).
///
/// # Safety
/// `out_re` and `out_im` must be valid for writes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn clausen_period(
    r: u32,
    p: u32,
    q: u32,
    cycle: i32,
    k: u32,
    lambda_re: f64,
    lambda_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> i32 {
    guard(|| {
        let sig = lift(validate_signature(r, p, q))?;
        let cycle = match cycle {
            0 => Cycle::A,
            1 => Cycle::B,
            _ => {
                return lift(Err(Error::InvalidArgument(format!(
                    "cycle must be 0 or 1, got {cycle}"
                ))))
            }
        };
        let v = lift(period_closed(
            &sig,
            cycle,
            k,
            Complex64::new(lambda_re, lambda_im),
        ))?;
        put(v, out_re, out_im)
    })
}

/// One check of the multivariate Clausen identity at real moduli.
///
/// # Safety
/// `out` must be valid for writes; on success it receives a handle to be
/// released with `clausen_report_free`.
#[no_mangle]
pub unsafe extern "C" fn clausen_verify_identity(
    beta1: f64,
    beta2: f64,
    lambda1: f64,
    lambda2: f64,
    out: *mut *mut ClausenReport,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let mp = lift(ModuliPoint::real(lambda1, lambda2))?;
        let rep = lift(verify_multivariate_clausen(beta1, beta2, &mp))?;
        *out = make_report(SuiteReport::new("clausen", vec![rep]))?;
        Ok(())
    })
}

/// Runs a named suite on its default grid.
///
/// # Safety
/// `suite` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn clausen_verify_suite(
    suite: *const c_char,
    seed: u64,
    parallelism: u32,
    out: *mut *mut ClausenReport,
) -> i32 {
    guard(|| {
        if suite.is_null() || out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let name = lift(
            CStr::from_ptr(suite)
                .to_str()
                .map_err(|e| Error::InvalidArgument(e.to_string())),
        )?;
        let s: Suite = lift(name.parse())?;
        let cfg = RunConfig {
            seed,
            parallelism: parallelism as usize,
            ..RunConfig::default()
        };
        let rep = lift(run_suite(s, &cfg))?;
        *out = make_report(rep)?;
        Ok(())
    })
}

/// Total and passed case counts of a report.
///
/// # Safety
/// `report` must come from this library; `total` and `passed` valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn clausen_report_counts(
    report: *const ClausenReport,
    total: *mut u64,
    passed: *mut u64,
) -> i32 {
    guard(|| {
        if report.is_null() || total.is_null() || passed.is_null() {
            return Err(null());
        }
        let s = &(*report).inner.summary;
        *total = s.total as u64;
        *passed = s.passed as u64;
        Ok(())
    })
}

/// The report as JSON. The string is owned by the report.
///
/// # Safety
/// `report` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn clausen_report_json(report: *const ClausenReport) -> *const c_char {
    if report.is_null() {
        null();
        return ptr::null();
    }
    (*report).json.as_ptr()
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn clausen_report_free(report: *mut ClausenReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
