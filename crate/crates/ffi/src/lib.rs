//! C ABI over `braidcat`.
//!
//! Every object crosses the boundary as an opaque pointer owned by the caller
//! and released with the matching `*_free`. Functions return a
//! [`BraidcatStatus`]; on failure the message is available from
//! [`braidcat_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use braidcat::braided::BraidedCore;
use braidcat::cli::{self, Command, RunConfig};
use braidcat::group::FiniteQuantumGroup;
use braidcat::report::Report;
use braidcat::rmatrix::RMatrix;
use braidcat::specs::{load_group, load_rmatrix};
use braidcat::theorems::extract_rmatrix;
use braidcat::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BraidcatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidString = 2,
    InvalidInput = 3,
    InvariantViolated = 4,
    NumericalFailure = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

pub struct BraidcatGroup(Arc<FiniteQuantumGroup>);
pub struct BraidcatRMatrix(RMatrix);
pub struct BraidcatCore(Arc<BraidedCore>);
pub struct BraidcatReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> BraidcatStatus {
    match err {
        Error::Invariant { .. } | Error::NotAMember { .. } => BraidcatStatus::InvariantViolated,
        Error::Precondition(_) => BraidcatStatus::NumericalFailure,
        _ => BraidcatStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), BraidcatStatus>) -> BraidcatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BraidcatStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            BraidcatStatus::Panic
        }
    }
}

fn fail(err: Error) -> BraidcatStatus {
    let s = status_of(&err);
    set_error(err.to_string());
    s
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, BraidcatStatus> {
    if s.is_null() {
        set_error("null string");
        return Err(BraidcatStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not UTF-8");
        BraidcatStatus::InvalidString
    })
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, BraidcatStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        BraidcatStatus::NullPointer
    })
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), BraidcatStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(BraidcatStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

/// Copies `s` plus a terminating NUL into `buf`. `*written` receives the
/// required size including the NUL, also when the buffer is too small.
unsafe fn copy_out(s: &str, buf: *mut c_char, len: usize, written: *mut usize) -> Result<(), BraidcatStatus> {
    let need = s.len() + 1;
    if !written.is_null() {
        written.write(need);
    }
    if buf.is_null() || len < need {
        set_error(format!("buffer of {len} bytes, {need} required"));
        return Err(BraidcatStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn braidcat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failure on this thread, or NULL. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn braidcat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Loads a builtin group name or a JSON group spec path.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn braidcat_group_load(spec: *const c_char, out: *mut *mut BraidcatGroup) -> BraidcatStatus {
    guard(|| {
        let g = load_group(text(spec)?).map_err(fail)?;
        put(out, Box::into_raw(Box::new(BraidcatGroup(Arc::new(g)))))
    })
}

/// # Safety
/// `group` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn braidcat_group_dim(group: *const BraidcatGroup, out: *mut usize) -> BraidcatStatus {
    guard(|| put(out, deref(group)?.0.dim_h()))
}

/// # Safety
/// `group` must be NULL or a handle from `braidcat_group_load` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn braidcat_group_free(group: *mut BraidcatGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Loads a builtin R-matrix name or JSON spec path for `group`; the axioms are checked on load.
///
/// # Safety
/// `group` must be a live handle, `spec` a valid string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn braidcat_rmatrix_load(
    group: *const BraidcatGroup,
    spec: *const c_char,
    out: *mut *mut BraidcatRMatrix,
) -> BraidcatStatus {
    guard(|| {
        let g = deref(group)?;
        let r = load_rmatrix(&g.0, text(spec)?).map_err(fail)?;
        put(out, Box::into_raw(Box::new(BraidcatRMatrix(r))))
    })
}

/// Side length of `R`, which is `dim(H)²`.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn braidcat_rmatrix_size(r: *const BraidcatRMatrix, out: *mut usize) -> BraidcatStatus {
    guard(|| put(out, deref(r)?.0.r().rows()))
}

/// Copies `R` row-major into `re` and `im`, each of length at least `size²`.
///
/// # Safety
/// `re` and `im` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn braidcat_rmatrix_entries(
    r: *const BraidcatRMatrix,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> BraidcatStatus {
    guard(|| {
        let m = deref(r)?.0.r();
        let n = m.rows();
        if len < n * n {
            set_error(format!("buffer of {len} entries, {} required", n * n));
            return Err(BraidcatStatus::BufferTooSmall);
        }
        if re.is_null() || im.is_null() {
            set_error("null output pointer");
            return Err(BraidcatStatus::NullPointer);
        }
        for i in 0..n {
            for j in 0..n {
                let z = m[(i, j)];
                *re.add(i * n + j) = z.re;
                *im.add(i * n + j) = z.im;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `r` must be NULL or a handle from `braidcat_rmatrix_load` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn braidcat_rmatrix_free(r: *mut BraidcatRMatrix) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Builds the braided core `A⊠A` for `r`.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn braidcat_core_build(r: *const BraidcatRMatrix, out: *mut *mut BraidcatCore) -> BraidcatStatus {
    guard(|| {
        let core = BraidedCore::build(&deref(r)?.0).map_err(fail)?;
        put(out, Box::into_raw(Box::new(BraidcatCore(Arc::new(core)))))
    })
}

/// Dimension of the core algebra.
///
/// # Safety
/// `core` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn braidcat_core_dim(core: *const BraidcatCore, out: *mut usize) -> BraidcatStatus {
    guard(|| put(out, deref(core)?.0.report().dim))
}

/// Normalized residual of `V₁αV₂β = V₂βV₁αR₁₂`.
///
/// # Safety
/// `core` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn braidcat_core_braiding_residual(core: *const BraidcatCore, out: *mut f64) -> BraidcatStatus {
    guard(|| put(out, deref(core)?.0.report().braiding))
}

/// Recovers `R` from the core and reports the entrywise distance to the input `R`.
///
/// # Safety
/// `core` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn braidcat_core_extraction_residual(
    core: *const BraidcatCore,
    out: *mut f64,
) -> BraidcatStatus {
    guard(|| {
        let e = extract_rmatrix(&deref(core)?.0).map_err(fail)?;
        put(out, e.round_trip.max(e.last_leg_residual))
    })
}

/// # Safety
/// `core` must be NULL or a handle from `braidcat_core_build` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn braidcat_core_free(core: *mut BraidcatCore) {
    if !core.is_null() {
        drop(Box::from_raw(core));
    }
}

/// Runs a CLI pipeline. `group`, `rmatrix` and `objects` (comma-separated) may be NULL;
/// `tolerance <= 0` keeps the built-in limits. Failed checks still return `Ok`;
/// inspect the report with `braidcat_report_pass`.
///
/// # Safety
/// String arguments must be NULL or valid NUL-terminated strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn braidcat_run(
    command: *const c_char,
    group: *const c_char,
    rmatrix: *const c_char,
    objects: *const c_char,
    tolerance: f64,
    out: *mut *mut BraidcatReport,
) -> BraidcatStatus {
    guard(|| {
        let command: Command = text(command)?.parse().map_err(fail)?;
        let mut cfg = RunConfig::new(command);
        if !group.is_null() {
            cfg.group = Some(text(group)?.to_string());
        }
        if !rmatrix.is_null() {
            cfg.rmatrix = text(rmatrix)?.to_string();
        }
        if !objects.is_null() {
            cfg.objects = text(objects)?.split(',').map(|s| s.trim().to_string()).collect();
        }
        if tolerance > 0.0 {
            cfg.tolerance = Some(tolerance);
        }
        cfg.seed = cli::seed_from_env().map_err(fail)?;
        let report = match cli::run(&cfg).map_err(fail)? {
            cli::Outcome::Report(r) => r,
            cli::Outcome::Listing(_) => {
                set_error("list-builtins produces no report");
                return Err(BraidcatStatus::InvalidInput);
            }
        };
        put(out, Box::into_raw(Box::new(BraidcatReport(report))))
    })
}

/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn braidcat_report_pass(report: *const BraidcatReport, out: *mut bool) -> BraidcatStatus {
    guard(|| put(out, deref(report)?.0.pass()))
}

/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn braidcat_report_check_count(report: *const BraidcatReport, out: *mut usize) -> BraidcatStatus {
    guard(|| put(out, deref(report)?.0.checks.len()))
}

/// Writes the JSON report into `buf`. `*written` receives the required size
/// including the NUL; call with `buf = NULL` to query it.
///
/// # Safety
/// `buf` must be NULL or point to `len` writable bytes; `written` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn braidcat_report_json(
    report: *const BraidcatReport,
    buf: *mut c_char,
    len: usize,
    written: *mut usize,
) -> BraidcatStatus {
    guard(|| copy_out(&deref(report)?.0.to_json(), buf, len, written))
}

/// # Safety
/// `report` must be NULL or a handle from `braidcat_run` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn braidcat_report_free(report: *mut BraidcatReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
