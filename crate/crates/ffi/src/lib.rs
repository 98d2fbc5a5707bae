//! C ABI over `quadbinom`.
//!
//! Every fallible call returns a [`QbStatus`]; on anything but `QB_OK` the
//! thread-local message from [`qb_last_error`] describes the failure.
//! Handles are opaque and must be released with their `_free` function.
//! Strings returned as `char *` are owned by the caller and released with
//! [`qb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quadbinom::bernoulli::bernoulli_table_mod_p;
use quadbinom::congruence::{
    verify_cor21, verify_cor22, verify_example_field, verify_granville, verify_thm11, verify_thm12,
    verify_thm13_bernoulli, verify_thm13_product, verify_thm21,
};
use quadbinom::lucas::{lucas_pair, LucasParams};
use quadbinom::ntheory::kronecker;
use quadbinom::quadfield::invariants;
use quadbinom::{CongruenceReport, Error, QuadFieldInvariants, TheoremId};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QbStatus {
    QbOk = 0,
    QbNullPointer = 1,
    QbInvalidArgument = 2,
    QbNotFundamental = 3,
    QbNotInvertible = 4,
    QbLimitExceeded = 5,
    QbInternal = 6,
    QbPanic = 7,
}

/// Invariants of one real quadratic field.
pub struct QbField(QuadFieldInvariants);

/// Outcome of one congruence check.
pub struct QbReport(CongruenceReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QbStatus {
    match e {
        Error::InvalidModulus(_)
        | Error::OutOfRange { .. }
        | Error::DivisibleBase { .. }
        | Error::EvenModulus(_)
        | Error::BadDenominator { .. }
        | Error::BadModulus { .. }
        | Error::BadParams(_) => QbStatus::QbInvalidArgument,
        Error::NotFundamental(_) => QbStatus::QbNotFundamental,
        Error::NotInvertible { .. } => QbStatus::QbNotInvertible,
        Error::IterCapExceeded { .. } | Error::IndexCap(_) | Error::PeriodCapExceeded { .. } => {
            QbStatus::QbLimitExceeded
        }
        Error::InternalInconsistency(_) | Error::Io(_) | Error::Json(_) => QbStatus::QbInternal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), QbStatus>) -> QbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QbStatus::QbOk,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside quadbinom".into());
            QbStatus::QbPanic
        }
    }
}

fn lift<T>(r: quadbinom::Result<T>) -> Result<T, QbStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), QbStatus> {
    if p.is_null() {
        set_error(format!("{name} is null"));
        Err(QbStatus::QbNullPointer)
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Kronecker symbol `(d/c)`: -1, 0 or 1.
#[no_mangle]
pub extern "C" fn qb_kronecker(d: i64, c: u64) -> i32 {
    kronecker(d, c) as i32
}

/// `u_n` and `v_n` of the Lucas sequences with parameters `(a, b)`,
/// reduced modulo `modulus`.
///
/// # Safety
/// `u_out` and `v_out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qb_lucas_pair(
    a: i64,
    b: i64,
    n: u64,
    modulus: u64,
    u_out: *mut u64,
    v_out: *mut u64,
) -> QbStatus {
    guard(|| {
        non_null(u_out, "u_out")?;
        non_null(v_out, "v_out")?;
        let (u, v) = lift(lucas_pair(&LucasParams::new(a, b), n, modulus))?;
        *u_out = u.value();
        *v_out = v.value();
        Ok(())
    })
}

/// Compute the invariants of `Q(sqrt(d))` for a fundamental discriminant `d`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qb_field_new(d: i64, out: *mut *mut QbField) -> QbStatus {
    guard(|| {
        non_null(out, "out")?;
        let f = lift(invariants(d))?;
        *out = Box::into_raw(Box::new(QbField(f)));
        Ok(())
    })
}

/// # Safety
/// `field` must be null or a handle from [`qb_field_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qb_field_free(field: *mut QbField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_field_d(field: *const QbField) -> i64 {
    (*field).0.d
}

/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_field_norm(field: *const QbField) -> i32 {
    (*field).0.norm as i32
}

/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_field_class_number(field: *const QbField) -> u64 {
    (*field).0.h
}

/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_field_narrow_class_number(field: *const QbField) -> u64 {
    (*field).0.h_narrow
}

/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_field_alpha(field: *const QbField) -> u32 {
    (*field).0.alpha
}

/// Coefficient `a` of the unit `(a + b sqrt(d))/2`, in decimal.
///
/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_field_unit_a(field: *const QbField) -> *mut c_char {
    into_c_string((*field).0.a.to_string())
}

/// Coefficient `b` of the unit `(a + b sqrt(d))/2`, in decimal.
///
/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_field_unit_b(field: *const QbField) -> *mut c_char {
    into_c_string((*field).0.b.to_string())
}

/// Check one congruence.
///
/// `theorem` is one of the command-line ids (`"granville"`, `"t11"`, ...).
/// `family` is `d` for field theorems and `m` otherwise. `rho` is read by
/// `t11` and `example`; `extra` is `r` for `t21` and `n` for `cor21`.
///
/// # Safety
/// `theorem` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qb_verify(
    theorem: *const c_char,
    family: i64,
    p: u64,
    rho: i32,
    extra: i64,
    out: *mut *mut QbReport,
) -> QbStatus {
    guard(|| {
        non_null(theorem, "theorem")?;
        non_null(out, "out")?;
        let id = CStr::from_ptr(theorem).to_str().map_err(|_| {
            set_error("theorem id is not UTF-8".into());
            QbStatus::QbInvalidArgument
        })?;
        let t: TheoremId = lift(id.parse())?;
        let rho = i8::try_from(rho).unwrap_or(0);
        let report = if t.uses_discriminant() {
            let f = lift(invariants(family))?;
            lift(match t {
                TheoremId::T11 => verify_thm11(&f, p, rho),
                TheoremId::T13Bern => verify_thm13_bernoulli(&f, p),
                TheoremId::T13Prod => verify_thm13_product(&f, p),
                _ => verify_example_field(&f, p, rho),
            })?
        } else {
            if family < 1 {
                set_error(format!("m = {family} must be positive"));
                return Err(QbStatus::QbInvalidArgument);
            }
            let m = family as u64;
            lift(match t {
                TheoremId::Granville => verify_granville(m, p),
                TheoremId::T12 => verify_thm12(m, p),
                TheoremId::Cor22 => verify_cor22(m, p),
                TheoremId::T21 => bernoulli_table_mod_p(p).and_then(|c| verify_thm21(&c, m, extra)),
                _ => {
                    if extra < 1 {
                        set_error(format!("n = {extra} must be positive"));
                        return Err(QbStatus::QbInvalidArgument);
                    }
                    bernoulli_table_mod_p(p).and_then(|c| verify_cor21(&c, m, extra as u64))
                }
            })?
        };
        *out = Box::into_raw(Box::new(QbReport(report)));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle from [`qb_verify`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qb_report_free(report: *mut QbReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_report_pass(report: *const QbReport) -> bool {
    (*report).0.pass
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_report_lhs(report: *const QbReport) -> u64 {
    (*report).0.lhs.value()
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_report_rhs(report: *const QbReport) -> u64 {
    (*report).0.rhs.value()
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_report_modulus(report: *const QbReport) -> u64 {
    (*report).0.modulus
}

/// The report as one JSON object.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qb_report_to_json(report: *const QbReport) -> *mut c_char {
    into_c_string((*report).0.to_json())
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn qb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
