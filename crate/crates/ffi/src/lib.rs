//! C ABI for the spindiff engine.
//!
//! Objects cross the boundary as opaque handles (`SdExpr`, `SdSpinor`,
//! `SdOp`) created by `sd_*` constructors and released with the matching
//! `*_free` function. Every call returns an [`SdStatus`]; on failure the
//! thread-local [`sd_last_error_message`] and [`sd_last_error_offset`]
//! describe what went wrong. Strings returned through out-parameters are
//! owned by the caller and must be released with [`sd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spindiff::ansatz::{assemble, solve, AnsatzSpec, SolveReport};
use spindiff::verify::{verify, Suite};
use spindiff::{parse, print, Angles, Expr, MatrixOp, OperatorId, PrintStyle, Spinor, SpinorId};

/// Result code of every `sd_*` call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    UnknownIdentifier = 4,
    InvalidArgument = 5,
    AnsatzError = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdPrintStyle {
    Exponential = 0,
    Trig = 1,
}

impl From<SdPrintStyle> for PrintStyle {
    fn from(s: SdPrintStyle) -> Self {
        match s {
            SdPrintStyle::Exponential => PrintStyle::Exponential,
            SdPrintStyle::Trig => PrintStyle::Trig,
        }
    }
}

/// An expression in the half-angle exponential basis.
pub struct SdExpr(Expr);

/// A two-component spinor.
pub struct SdSpinor(Spinor);

/// A 2x2 matrix of differential operators.
pub struct SdOp(MatrixOp);

struct LastError {
    message: CString,
    offset: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

struct Failure {
    status: SdStatus,
    message: String,
    offset: i64,
}

impl Failure {
    fn new(status: SdStatus, message: impl Into<String>) -> Self {
        Failure { status, message: message.into(), offset: -1 }
    }
}

fn set_error(message: &str, offset: i64) {
    let message = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(LastError { message, offset }));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SdStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SdStatus::Ok,
        Ok(Err(fail)) => {
            set_error(&fail.message, fail.offset);
            fail.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(&format!("internal error: {msg}"), -1);
            SdStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(SdStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::new(SdStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn read<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(SdStatus::NullPointer, "null handle"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(SdStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_box<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(SdStatus::NullPointer, "null output pointer"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::new(SdStatus::InvalidArgument, "output contains a nul byte"))?;
    if out.is_null() {
        return Err(Failure::new(SdStatus::NullPointer, "null output pointer"));
    }
    out.write(c.into_raw());
    Ok(())
}

unsafe fn free_box<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next `sd_*` call on the same thread.
#[no_mangle]
pub extern "C" fn sd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |e| e.message.as_ptr()))
}

/// Character offset of the last parse error on this thread, or -1.
#[no_mangle]
pub extern "C" fn sd_last_error_offset() -> i64 {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(-1, |e| e.offset))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `text` in the expression grammar.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_expr_parse(text: *const c_char, out: *mut *mut SdExpr) -> SdStatus {
    guard(|| {
        let text = read_str(text)?;
        let e = parse(text).map_err(|e| Failure {
            status: SdStatus::ParseError,
            message: e.to_string(),
            offset: e.offset as i64,
        })?;
        write_box(out, SdExpr(e))
    })
}

/// # Safety
/// `e` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_expr_print(e: *const SdExpr, style: SdPrintStyle, out: *mut *mut c_char) -> SdStatus {
    guard(|| write_string(out, print(&read(e)?.0, style.into())))
}

/// Evaluates at the given angles (radians).
///
/// # Safety
/// `e` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_expr_eval(
    e: *const SdExpr,
    theta: f64,
    phi: f64,
    theta_p: f64,
    phi_p: f64,
    re: *mut f64,
    im: *mut f64,
) -> SdStatus {
    guard(|| {
        let z = read(e)?.0.eval(&Angles::with_initial(theta, phi, theta_p, phi_p));
        write(re, z.re)?;
        write(im, z.im)
    })
}

/// Exact equality of two expressions.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_expr_equal(a: *const SdExpr, b: *const SdExpr, out: *mut bool) -> SdStatus {
    guard(|| write(out, read(a)?.0 == read(b)?.0))
}

/// # Safety
/// `e` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_expr_free(e: *mut SdExpr) {
    free_box(e)
}

/// Builds a named spinor such as `z+` or `ycorr-`.
///
/// # Safety
/// `id` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_spinor_build(id: *const c_char, out: *mut *mut SdSpinor) -> SdStatus {
    guard(|| {
        let id: SpinorId = read_str(id)?
            .parse()
            .map_err(|e: spindiff::error::SpinorError| Failure::new(SdStatus::UnknownIdentifier, e.to_string()))?;
        write_box(out, SdSpinor(id.build()))
    })
}

/// Copies component `index` (0 = top, 1 = bottom) into a new expression.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_spinor_component(s: *const SdSpinor, index: u32, out: *mut *mut SdExpr) -> SdStatus {
    guard(|| {
        let s = read(s)?;
        if index > 1 {
            return Err(Failure::new(SdStatus::InvalidArgument, format!("component index {index} out of range")));
        }
        write_box(out, SdExpr(s.0.component(index as usize).clone()))
    })
}

/// # Safety
/// `s` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_spinor_free(s: *mut SdSpinor) {
    free_box(s)
}

/// Builds a named operator: `Sz`, `Sx`, `Sy`, `S2closed`, `S2composed`.
///
/// # Safety
/// `id` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_op_build(id: *const c_char, out: *mut *mut SdOp) -> SdStatus {
    guard(|| {
        let id: OperatorId = read_str(id)?
            .parse()
            .map_err(|e: spindiff::error::OperatorError| Failure::new(SdStatus::UnknownIdentifier, e.to_string()))?;
        write_box(out, SdOp(id.build()))
    })
}

/// # Safety
/// `op`, `s` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_op_apply(op: *const SdOp, s: *const SdSpinor, out: *mut *mut SdSpinor) -> SdStatus {
    guard(|| write_box(out, SdSpinor(read(op)?.0.apply(&read(s)?.0))))
}

/// `a` after `b`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_op_compose(a: *const SdOp, b: *const SdOp, out: *mut *mut SdOp) -> SdStatus {
    guard(|| write_box(out, SdOp(read(a)?.0.compose(&read(b)?.0))))
}

/// `[a, b]`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_op_commutator(a: *const SdOp, b: *const SdOp, out: *mut *mut SdOp) -> SdStatus {
    guard(|| write_box(out, SdOp(read(a)?.0.commutator(&read(b)?.0))))
}

/// # Safety
/// `op` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_op_is_zero(op: *const SdOp, out: *mut bool) -> SdStatus {
    guard(|| write(out, read(op)?.0.is_zero()))
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_op_equal(a: *const SdOp, b: *const SdOp, out: *mut bool) -> SdStatus {
    guard(|| write(out, read(a)?.0 == read(b)?.0))
}

/// Entry-by-entry text, one `[r,c]: ...` line per entry.
///
/// # Safety
/// `op` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_op_print(op: *const SdOp, style: SdPrintStyle, out: *mut *mut c_char) -> SdStatus {
    guard(|| write_string(out, read(op)?.0.to_text(style.into())))
}

/// # Safety
/// `op` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_op_free(op: *mut SdOp) {
    free_box(op)
}

/// Runs a verification suite and returns its JSON report and the number of
/// failed items.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `out_json` and `out_failures`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_verify(
    suite: *const c_char,
    seed: u64,
    out_json: *mut *mut c_char,
    out_failures: *mut u32,
) -> SdStatus {
    guard(|| {
        let suite: Suite =
            read_str(suite)?.parse().map_err(|e: String| Failure::new(SdStatus::UnknownIdentifier, e))?;
        let report = verify(suite, seed);
        write(out_failures, report.summary.fail as u32)?;
        write_string(out_json, report.to_json())
    })
}

/// Solves an ansatz given as a JSON document; returns the solve report as JSON.
///
/// # Safety
/// `ansatz_json` must be a NUL-terminated string; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_solve_json(ansatz_json: *const c_char, out_json: *mut *mut c_char) -> SdStatus {
    guard(|| {
        let spec = AnsatzSpec::from_json(read_str(ansatz_json)?).map_err(|e| {
            let offset = match &e {
                spindiff::error::AnsatzFileError::Expression { source, .. } => source.offset as i64,
                _ => -1,
            };
            Failure { status: SdStatus::AnsatzError, message: e.to_string(), offset }
        })?;
        let ls = assemble(&spec).map_err(|e| Failure::new(SdStatus::AnsatzError, e.to_string()))?;
        let report = SolveReport::new(&spec, &ls, &solve(&ls));
        write_string(out_json, serde_json::to_string_pretty(&report).expect("serializable"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_status() {
        let st = guard(|| panic!("boom"));
        assert_eq!(st, SdStatus::Panic);
        let msg = unsafe { CStr::from_ptr(sd_last_error_message()) }.to_str().unwrap();
        assert_eq!(msg, "internal error: boom");
    }

    #[test]
    fn success_clears_error() {
        let _ = guard(|| Err(Failure::new(SdStatus::InvalidArgument, "x")));
        assert!(!sd_last_error_message().is_null());
        assert_eq!(guard(|| Ok(())), SdStatus::Ok);
        assert!(sd_last_error_message().is_null());
        assert_eq!(sd_last_error_offset(), -1);
    }
}
