//! C ABI for graydeform: load a structure from JSON into an opaque handle,
//! validate it, compute cohomology dimensions, classify deformations and
//! run the brute-force oracle. Every entry point returns a [`GdStatus`];
//! the message of the last failure on the calling thread is available from
//! [`gd_last_error`]. Strings returned through out-parameters are owned by
//! the caller and released with [`gd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use graydeform::cli::{classify_representatives, linear_algebra_betti, parse_field};
use graydeform::defcomplex::{cohomology, ComplexSelection, DefComplex};
use graydeform::deformations::{brute_force_classes, ClassifyMode, DeformationSpaces};
use graydeform::error::Error;
use graydeform::gray::validate_gray;
use graydeform::schema::{load_structure, Structure};
use graydeform::twocat::validate_two_category;

/// Result codes. The first four agree with the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GdStatus {
    Ok = 0,
    /// Validation failure, failed precondition or failed internal check.
    Invalid = 1,
    /// Malformed JSON, unknown names or an invalid field.
    Parse = 2,
    /// A degree or enumeration cap was exceeded.
    ResourceCap = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
    /// A string argument was not valid UTF-8.
    Utf8 = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// Opaque handle to a loaded 2-category or Gray semigroup.
pub struct GdStructure {
    inner: Structure,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GdStatus {
    match e {
        Error::Parse(_) | Error::InvalidField(_) => GdStatus::Parse,
        Error::ResourceCap(_) => GdStatus::ResourceCap,
        _ => GdStatus::Invalid,
    }
}

struct Fail(GdStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> GdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => GdStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside graydeform".into());
            GdStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(GdStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: the caller passes a nul-terminated string valid for this call.
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| Fail(GdStatus::Utf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(h: *const GdStructure) -> Result<&'a GdStructure, Fail> {
    // SAFETY: non-null handles come from `gd_structure_load` and are live.
    unsafe { h.as_ref() }.ok_or_else(|| Fail(GdStatus::NullPointer, "structure handle is null".into()))
}

fn gray_complex(s: &GdStructure) -> Result<DefComplex, Fail> {
    let g = s.inner.gray().ok_or_else(|| Fail(GdStatus::Invalid, "the structure is not a Gray semigroup".into()))?;
    Ok(DefComplex::new(g.clone()))
}

fn out_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(GdStatus::Invalid, "output contains a nul byte".into()))?;
    // SAFETY: `out` was checked to be non-null by the caller of this helper.
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn non_null<T>(p: *mut T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(GdStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn gd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a structure document. `field` is null (use the document's field),
/// `"q"` or `"p=<prime>"`.
///
/// # Safety
/// `json` and (if non-null) `field` must be nul-terminated strings; `out`
/// must point to writable storage for a handle pointer.
#[no_mangle]
pub unsafe extern "C" fn gd_structure_load(json: *const c_char, field: *const c_char, out: *mut *mut GdStructure) -> GdStatus {
    guard(|| {
        non_null(out, "out")?;
        let json = unsafe { text(json, "json") }?;
        let field = if field.is_null() {
            None
        } else {
            let f = unsafe { text(field, "field") }?;
            Some(parse_field(f).map_err(|m| Fail(GdStatus::Parse, m))?)
        };
        let inner = load_structure(json, field)?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(GdStructure { inner })) };
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `h` must be null or a handle from [`gd_structure_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gd_structure_free(h: *mut GdStructure) {
    if !h.is_null() {
        // SAFETY: ownership returns to Rust exactly once.
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Whether the handle is a Gray semigroup (as opposed to a bare 2-category).
///
/// # Safety
/// `h` must be a live handle; `is_gray` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gd_structure_is_gray(h: *const GdStructure, is_gray: *mut bool) -> GdStatus {
    guard(|| {
        non_null(is_gray, "is_gray")?;
        let s = unsafe { handle(h) }?;
        unsafe { *is_gray = s.inner.gray().is_some() };
        Ok(())
    })
}

/// Checks all axioms; `valid` receives the verdict and `violations` the
/// number of failed instances. Returns `Ok` whenever the check ran.
///
/// # Safety
/// `h` must be a live handle; `valid` and `violations` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gd_validate(h: *const GdStructure, valid: *mut bool, violations: *mut usize) -> GdStatus {
    guard(|| {
        non_null(valid, "valid")?;
        non_null(violations, "violations")?;
        let s = unsafe { handle(h) }?;
        let report = match &s.inner {
            Structure::TwoCategory(c) => validate_two_category(c),
            Structure::Gray(g) => validate_gray(g)?,
        };
        unsafe {
            *valid = report.is_valid();
            *violations = report.violations.len();
        }
        Ok(())
    })
}

/// Dimension of the degree-`degree` cohomology of the complex named
/// `complex` (`unit`, `tens_ass`, `ass`, `tens`, `pent_restricted`,
/// `pent_general`).
///
/// # Safety
/// `h` must be a live handle, `complex` a nul-terminated string and
/// `betti` writable.
#[no_mangle]
pub unsafe extern "C" fn gd_cohomology_dim(h: *const GdStructure, complex: *const c_char, degree: u32, betti: *mut usize) -> GdStatus {
    guard(|| {
        non_null(betti, "betti")?;
        let s = unsafe { handle(h) }?;
        let sel: ComplexSelection = unsafe { text(complex, "complex") }?.parse()?;
        let dc = gray_complex(s)?;
        let c = cohomology(&dc, sel, degree as usize, false)?;
        unsafe { *betti = c.betti };
        Ok(())
    })
}

/// Class representatives for `mode` (`unit`, `tens_ass`, `ass`, `tens`,
/// `pent`) as a JSON array whose first element is `null` (the trivial class).
///
/// # Safety
/// `h` must be a live handle, `mode` a nul-terminated string and `json`
/// writable; free the result with [`gd_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gd_classify_json(h: *const GdStructure, mode: *const c_char, json: *mut *mut c_char) -> GdStatus {
    guard(|| {
        non_null(json, "json")?;
        let s = unsafe { handle(h) }?;
        let mode: ClassifyMode = unsafe { text(mode, "mode") }?.parse()?;
        let dc = gray_complex(s)?;
        let sp = DeformationSpaces::new(&dc)?;
        let (_, reps) = classify_representatives(&dc, &sp, mode)?;
        let mut classes = vec!["null".to_string()];
        classes.extend(reps.iter().map(|d| sp.deformation_json(d).to_string()));
        out_string(json, format!("[{}]", classes.join(",")))
    })
}

/// Runs the exhaustive oracle for `mode` over the structure's prime field:
/// `la_betti` receives the Betti number of the classifying complex,
/// `brute_classes` the enumerated class count and `agree` whether
/// `p^la_betti == brute_classes`.
///
/// # Safety
/// `h` must be a live handle, `mode` a nul-terminated string and the
/// out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn gd_oracle(
    h: *const GdStructure,
    mode: *const c_char,
    enum_bound: u64,
    la_betti: *mut usize,
    brute_classes: *mut usize,
    agree: *mut bool,
) -> GdStatus {
    guard(|| {
        non_null(la_betti, "la_betti")?;
        non_null(brute_classes, "brute_classes")?;
        non_null(agree, "agree")?;
        let s = unsafe { handle(h) }?;
        let mode: ClassifyMode = unsafe { text(mode, "mode") }?.parse()?;
        let dc = gray_complex(s)?;
        let p = dc.gray().field().order().ok_or_else(|| Fail(GdStatus::Invalid, "the oracle needs a prime field".into()))?;
        let sp = DeformationSpaces::new(&dc)?;
        let betti = linear_algebra_betti(&dc, mode, false)?;
        let report = brute_force_classes(&sp, mode, enum_bound, None)?;
        unsafe {
            *la_betti = betti;
            *brute_classes = report.classes;
            *agree = (p as u128).checked_pow(betti as u32) == Some(report.classes as u128);
        }
        Ok(())
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gd_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: the string was produced by `CString::into_raw`.
        drop(unsafe { CString::from_raw(s) });
    }
}
