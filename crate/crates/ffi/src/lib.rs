//! C interface to `dirac-core`.
//!
//! Objects cross the boundary as opaque handles that the caller releases
//! with the matching `*_free` function. Every fallible call returns a
//! [`DiracStatus`]; on failure the message is kept per thread and can be
//! fetched with [`dirac_last_error`]. Strings returned by this library are
//! owned by the caller and released with [`dirac_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dirac_core::cli::{emit_report, run_example_suite, run_source, Format, RunReport};
use dirac_core::symalg::{parse_expr, Expr, Patch};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiracStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    Run = 5,
    Panic = 6,
}

/// Output format for [`dirac_report_render`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiracFormat {
    Text = 0,
    Json = 1,
}

/// A coordinate patch.
pub struct DiracPatch(Patch);

/// A polynomial on a patch.
pub struct DiracExpr(Expr);

/// The verdicts of a check run.
pub struct DiracReport(RunReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(DiracStatus, String);

type Res<T> = Result<T, Fail>;

fn guard(f: impl FnOnce() -> Res<()>) -> DiracStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DiracStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            DiracStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(Fail(DiracStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(DiracStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Res<&'a T> {
    p.as_ref()
        .ok_or_else(|| Fail(DiracStatus::NullPointer, format!("{what} is null")))
}

fn out_arg<T>(out: *mut *mut T) -> Res<()> {
    if out.is_null() {
        Err(Fail(DiracStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or NULL. The caller
/// frees the result with `dirac_string_free`.
#[no_mangle]
pub extern "C" fn dirac_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |s| s.clone().into_raw())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn dirac_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create a patch with `n` coordinate names.
///
/// # Safety
/// `name` and the `n` entries of `coords` must be valid C strings and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dirac_patch_new(
    name: *const c_char,
    coords: *const *const c_char,
    n: usize,
    out: *mut *mut DiracPatch,
) -> DiracStatus {
    guard(|| {
        out_arg(out)?;
        let name = str_arg(name, "name")?;
        if coords.is_null() && n > 0 {
            return Err(Fail(DiracStatus::NullPointer, "coords is null".into()));
        }
        let mut names = Vec::with_capacity(n);
        for i in 0..n {
            names.push(str_arg(*coords.add(i), "coordinate")?.to_string());
        }
        let p = Patch::new(name, names).map_err(|e| Fail(DiracStatus::InvalidArgument, e.to_string()))?;
        *out = Box::into_raw(Box::new(DiracPatch(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must be NULL or a handle from `dirac_patch_new`, freed once.
#[no_mangle]
pub unsafe extern "C" fn dirac_patch_free(p: *mut DiracPatch) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of coordinates, or 0 for NULL.
///
/// # Safety
/// `p` must be NULL or a live patch handle.
#[no_mangle]
pub unsafe extern "C" fn dirac_patch_dim(p: *const DiracPatch) -> usize {
    p.as_ref().map_or(0, |p| p.0.dim())
}

/// Parse a polynomial in the coordinates of `patch`.
///
/// # Safety
/// `patch` must be a live handle, `src` a C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dirac_expr_parse(
    patch: *const DiracPatch,
    src: *const c_char,
    out: *mut *mut DiracExpr,
) -> DiracStatus {
    guard(|| {
        out_arg(out)?;
        let p = ref_arg(patch, "patch")?;
        let src = str_arg(src, "src")?;
        let e = parse_expr(src, &p.0).map_err(|e| Fail(DiracStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(DiracExpr(e)));
        Ok(())
    })
}

/// # Safety
/// `e` must be NULL or an expression handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn dirac_expr_free(e: *mut DiracExpr) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Partial derivative with respect to coordinate `i` (0-based).
///
/// # Safety
/// `e` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dirac_expr_diff(e: *const DiracExpr, i: usize, out: *mut *mut DiracExpr) -> DiracStatus {
    guard(|| {
        out_arg(out)?;
        let e = ref_arg(e, "expr")?;
        let dim = e.0.patch().dim();
        if i >= dim {
            return Err(Fail(
                DiracStatus::InvalidArgument,
                format!("coordinate {i} out of range for a patch of dimension {dim}"),
            ));
        }
        *out = Box::into_raw(Box::new(DiracExpr(e.0.diff(i))));
        Ok(())
    })
}

/// Whether the expression is identically zero. Returns false for NULL.
///
/// # Safety
/// `e` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirac_expr_is_zero(e: *const DiracExpr) -> bool {
    e.as_ref().is_some_and(|e| e.0.is_zero())
}

/// Canonical text of the expression, or NULL for a NULL handle. Free with
/// `dirac_string_free`.
///
/// # Safety
/// `e` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirac_expr_to_string(e: *const DiracExpr) -> *mut c_char {
    e.as_ref().map_or(ptr::null_mut(), |e| owned_string(e.0.to_string()))
}

/// Run a check file given as source text.
///
/// # Safety
/// `src` must be a C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dirac_run_source(src: *const c_char, out: *mut *mut DiracReport) -> DiracStatus {
    guard(|| {
        out_arg(out)?;
        let src = str_arg(src, "src")?;
        let r = run_source(src).map_err(|e| Fail(DiracStatus::Run, e.to_string()))?;
        *out = Box::into_raw(Box::new(DiracReport(r)));
        Ok(())
    })
}

/// Run the built-in example suite.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dirac_run_example_suite(out: *mut *mut DiracReport) -> DiracStatus {
    guard(|| {
        out_arg(out)?;
        *out = Box::into_raw(Box::new(DiracReport(run_example_suite())));
        Ok(())
    })
}

/// # Safety
/// `r` must be NULL or a report handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn dirac_report_free(r: *mut DiracReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirac_report_len(r: *const DiracReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.checks.len())
}

/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirac_report_pass_count(r: *const DiracReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.pass_count())
}

/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirac_report_fail_count(r: *const DiracReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.fail_count())
}

/// Process exit code the `verify` binary would use: 0 when every check
/// met its expectation, 1 otherwise. -1 for NULL.
///
/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirac_report_exit_code(r: *const DiracReport) -> i32 {
    r.as_ref().map_or(-1, |r| r.0.exit_code())
}

/// Render the report as text or JSON. Free with `dirac_string_free`.
///
/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dirac_report_render(r: *const DiracReport, format: DiracFormat) -> *mut c_char {
    let Some(r) = r.as_ref() else {
        return ptr::null_mut();
    };
    let format = match format {
        DiracFormat::Text => Format::Text,
        DiracFormat::Json => Format::Json,
    };
    owned_string(emit_report(&r.0, format, false))
}
