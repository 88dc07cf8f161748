//! C interface to `sumset-kit`.
//!
//! Groups and subsets are opaque handles owned by the caller and released
//! with the matching `*_free`. Every function returns an [`SkStatus`]; on
//! failure the message is available from [`sk_last_error`] on the same thread.
//! JSON strings returned through `char **` are released with [`sk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sumset_kit::decompose::{check_certificate, dual_decompose, kemperman_decompose, me_decompose, Certificate};
use sumset_kit::elementary::is_elementary;
use sumset_kit::error::Error;
use sumset_kit::group::{parse_group, FiniteAbelianGroup};
use sumset_kit::subset::GroupSubset;
use sumset_kit::sumset::sumset;
use sumset_kit::theorems::{verify_theorem, TheoremId};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Precondition = 5,
    Contract = 6,
    Resource = 7,
    Usage = 8,
    Invariant = 9,
    Panic = 10,
}

/// A finite abelian group.
pub struct SkGroup(FiniteAbelianGroup);

/// A subset of a group.
pub struct SkSubset(GroupSubset);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Failure {
    Null(&'static str),
    Utf8(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn status_of(e: &Error) -> SkStatus {
    match e {
        Error::Parse { .. } => SkStatus::Parse,
        Error::Domain(_) => SkStatus::Domain,
        Error::Precondition { .. } => SkStatus::Precondition,
        Error::Contract(_) => SkStatus::Contract,
        Error::Resource(_) => SkStatus::Resource,
        Error::Usage(_) => SkStatus::Usage,
        Error::Invariant(_) => SkStatus::Invariant,
    }
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SkStatus::Ok,
        Ok(Err(Failure::Null(arg))) => {
            set_last_error(format!("null pointer: {arg}"));
            SkStatus::NullPointer
        }
        Ok(Err(Failure::Utf8(arg))) => {
            set_last_error(format!("invalid utf-8: {arg}"));
            SkStatus::InvalidUtf8
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            SkStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, arg: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(arg))
}

unsafe fn out<'a, T>(p: *mut T, arg: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(arg))
}

unsafe fn text<'a>(p: *const c_char, arg: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(arg));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(arg))
}

fn same_group(a: &GroupSubset, b: &GroupSubset) -> Result<(), Failure> {
    a.check_same_group(b)?;
    Ok(())
}

fn write_string(dst: &mut *mut c_char, s: String) {
    *dst = CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw();
}

/// Parses a group spec such as `"Z2xZ4"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out_group` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sk_group_parse(spec: *const c_char, out_group: *mut *mut SkGroup) -> SkStatus {
    guard(|| {
        let dst = out(out_group, "out_group")?;
        *dst = ptr::null_mut();
        let g = parse_group(text(spec, "spec")?)?;
        *dst = Box::into_raw(Box::new(SkGroup(g)));
        Ok(())
    })
}

/// Writes the order of the group.
///
/// # Safety
/// `group` must come from `sk_group_parse`; `out_order` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sk_group_order(group: *const SkGroup, out_order: *mut usize) -> SkStatus {
    guard(|| {
        *out(out_order, "out_order")? = deref(group, "group")?.0.order();
        Ok(())
    })
}

/// Releases a group. Null is ignored.
///
/// # Safety
/// `group` must come from `sk_group_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sk_group_free(group: *mut SkGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Parses a subset given as a JSON list of coordinate tuples or as
/// comma-separated residues.
///
/// # Safety
/// `group` must be live; `spec` NUL-terminated; `out_subset` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_subset_parse(
    group: *const SkGroup,
    spec: *const c_char,
    out_subset: *mut *mut SkSubset,
) -> SkStatus {
    guard(|| {
        let dst = out(out_subset, "out_subset")?;
        *dst = ptr::null_mut();
        let g = &deref(group, "group")?.0;
        let s = GroupSubset::parse(g, text(spec, "spec")?)?;
        *dst = Box::into_raw(Box::new(SkSubset(s)));
        Ok(())
    })
}

/// Writes the number of elements of the subset.
///
/// # Safety
/// `subset` must be live; `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_subset_len(subset: *const SkSubset, out_len: *mut usize) -> SkStatus {
    guard(|| {
        *out(out_len, "out_len")? = deref(subset, "subset")?.0.len();
        Ok(())
    })
}

/// Writes the subset as a JSON list of coordinate tuples.
///
/// # Safety
/// `subset` must be live; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_subset_to_json(subset: *const SkSubset, out_json: *mut *mut c_char) -> SkStatus {
    guard(|| {
        let dst = out(out_json, "out_json")?;
        *dst = ptr::null_mut();
        write_string(dst, deref(subset, "subset")?.0.to_json().to_string());
        Ok(())
    })
}

/// Releases a subset. Null is ignored.
///
/// # Safety
/// `subset` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sk_subset_free(subset: *mut SkSubset) {
    if !subset.is_null() {
        drop(Box::from_raw(subset));
    }
}

/// Computes `A+B` as a new subset.
///
/// # Safety
/// `a`, `b` must be live; `out_sum` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_sumset(a: *const SkSubset, b: *const SkSubset, out_sum: *mut *mut SkSubset) -> SkStatus {
    guard(|| {
        let dst = out(out_sum, "out_sum")?;
        *dst = ptr::null_mut();
        let s = sumset(&deref(a, "a")?.0, &deref(b, "b")?.0)?;
        *dst = Box::into_raw(Box::new(SkSubset(s)));
        Ok(())
    })
}

/// Writes whether `(A, B)` is an elementary pair.
///
/// # Safety
/// `a`, `b` must be live; `out_flag` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_is_elementary(a: *const SkSubset, b: *const SkSubset, out_flag: *mut bool) -> SkStatus {
    guard(|| {
        *out(out_flag, "out_flag")? = is_elementary(&deref(a, "a")?.0, &deref(b, "b")?.0)?;
        Ok(())
    })
}

/// Builds a certificate for `(A, B)` in the given mode (`"kemperman"`,
/// `"dual"` or `"me"`) and writes it as JSON.
///
/// # Safety
/// `a`, `b` must be live; `mode` NUL-terminated; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_decompose(
    a: *const SkSubset,
    b: *const SkSubset,
    mode: *const c_char,
    out_json: *mut *mut c_char,
) -> SkStatus {
    guard(|| {
        let dst = out(out_json, "out_json")?;
        *dst = ptr::null_mut();
        let (a, b) = (&deref(a, "a")?.0, &deref(b, "b")?.0);
        same_group(a, b)?;
        let cert = match text(mode, "mode")? {
            "kemperman" => Certificate::Kemperman(kemperman_decompose(a, b)?),
            "dual" => Certificate::Dual(dual_decompose(a, b)?),
            "me" => Certificate::Me(me_decompose(a, b)?),
            other => return Err(Error::Usage(format!("unknown mode {other:?}")).into()),
        };
        write_string(dst, cert.to_json(a.group()).to_string());
        Ok(())
    })
}

/// Checks a JSON certificate against `(A, B)`. Writes the verdict to
/// `out_valid` and, when `out_report` is non-null, the clause report as JSON.
///
/// # Safety
/// `a`, `b` must be live; `cert_json` NUL-terminated; `out_valid` writable;
/// `out_report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sk_check_certificate(
    a: *const SkSubset,
    b: *const SkSubset,
    cert_json: *const c_char,
    out_valid: *mut bool,
    out_report: *mut *mut c_char,
) -> SkStatus {
    guard(|| {
        let valid = out(out_valid, "out_valid")?;
        let report = out_report.as_mut();
        let (a, b) = (&deref(a, "a")?.0, &deref(b, "b")?.0);
        same_group(a, b)?;
        let raw = text(cert_json, "cert_json")?;
        let value: serde_json::Value = serde_json::from_str(raw).map_err(|e| Error::Parse {
            token: raw.chars().take(40).collect(),
            reason: e.to_string(),
        })?;
        let value = value.get("certificate").cloned().unwrap_or(value);
        let cert = Certificate::from_json(a.group(), &value)?;
        let check = check_certificate(a, b, &cert);
        *valid = check.valid;
        if let Some(dst) = report {
            write_string(dst, serde_json::to_string(&check).expect("report serializes"));
        }
        Ok(())
    })
}

/// Evaluates one statement (`"kneser"`, `"kemperman_scherk"`,
/// `"corollary_half"`, `"equality_claim"`) on `(A, B)` and writes the report
/// as JSON.
///
/// # Safety
/// `a`, `b` must be live; `theorem` NUL-terminated; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_verify(
    theorem: *const c_char,
    a: *const SkSubset,
    b: *const SkSubset,
    out_json: *mut *mut c_char,
) -> SkStatus {
    guard(|| {
        let dst = out(out_json, "out_json")?;
        *dst = ptr::null_mut();
        let id: TheoremId = text(theorem, "theorem")?.parse()?;
        let report = verify_theorem(id, &deref(a, "a")?.0, &deref(b, "b")?.0)?;
        write_string(dst, serde_json::to_string(&report).expect("report serializes"));
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn sk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn sk_status_name(status: SkStatus) -> *const c_char {
    let name: &'static CStr = match status {
        SkStatus::Ok => c"ok",
        SkStatus::NullPointer => c"null_pointer",
        SkStatus::InvalidUtf8 => c"invalid_utf8",
        SkStatus::Parse => c"parse",
        SkStatus::Domain => c"domain",
        SkStatus::Precondition => c"precondition",
        SkStatus::Contract => c"contract",
        SkStatus::Resource => c"resource",
        SkStatus::Usage => c"usage",
        SkStatus::Invariant => c"invariant",
        SkStatus::Panic => c"panic",
    };
    name.as_ptr()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn status_names_match_core_error_kinds() {
        for (e, s) in [
            (Error::Domain("x".into()), SkStatus::Domain),
            (Error::Resource("x".into()), SkStatus::Resource),
            (Error::Invariant("x".into()), SkStatus::Invariant),
        ] {
            assert_eq!(status_of(&e), s);
            let name = unsafe { CStr::from_ptr(sk_status_name(s)) };
            assert_eq!(name.to_str().unwrap(), e.kind());
        }
    }

    #[test]
    fn panics_become_status_codes() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, SkStatus::Panic);
        let msg = unsafe { CStr::from_ptr(sk_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "panic: boom");
    }

    #[test]
    fn null_outputs_are_rejected() {
        let spec = cstr("Z6");
        assert_eq!(unsafe { sk_group_parse(spec.as_ptr(), ptr::null_mut()) }, SkStatus::NullPointer);
        assert!(!sk_last_error().is_null());
    }
}
