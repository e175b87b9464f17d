//! C interface to `toric-rigid`.
//!
//! Objects cross the boundary as opaque handles released with the matching
//! `*_free` function. Structured results are returned as JSON strings owned
//! by the caller and released with [`toric_string_free`]. Every fallible
//! call returns a [`ToricStatus`]; the message of the last failure on the
//! calling thread is available from [`toric_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use toric_rigid::atlas::{build_atlas_with, Atlas, AtlasOptions};
use toric_rigid::cli::to_json;
use toric_rigid::element::{ElementJson, ToricElement as Element};
use toric_rigid::error::ToricError;
use toric_rigid::fan::{hirzebruch_fan, projective_fan, Fan, FanSpec, FanSpecError};
use toric_rigid::reduction::reduction_json;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToricStatus {
    Ok = 0,
    Domain = 1,
    Inconclusive = 2,
    Parse = 3,
    NullPointer = 4,
    Panic = 5,
}

/// A validated fan.
pub struct ToricFan(Fan);

/// A chart atlas built from a fan.
pub struct ToricAtlas(Atlas);

/// An element of a toric affinoid algebra.
pub struct ToricElement(Element);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("no interior nul"));
}

fn status_of(e: &ToricError) -> ToricStatus {
    match e {
        ToricError::Inconclusive(_) => ToricStatus::Inconclusive,
        ToricError::Parse(_) | ToricError::Io(_) => ToricStatus::Parse,
        ToricError::Dimension { .. } | ToricError::Domain(_) | ToricError::Internal(_) => ToricStatus::Domain,
    }
}

fn fail(e: ToricError) -> ToricStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn guard(f: impl FnOnce() -> ToricStatus) -> ToricStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == ToricStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => {
            set_error("panic inside toric-rigid");
            ToricStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ToricStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(ToricStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|e| {
        set_error(format!("argument is not UTF-8: {e}"));
        ToricStatus::Parse
    })
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> ToricStatus {
    *out = Box::into_raw(Box::new(value));
    ToricStatus::Ok
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> ToricStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            ToricStatus::Ok
        }
        Err(_) => {
            set_error("output contains a nul byte");
            ToricStatus::Domain
        }
    }
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return ToricStatus::NullPointer;
        })+
    };
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail(e),
        }
    };
}

/// Message of the last failed call on this thread (empty after a success).
/// The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn toric_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn toric_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn toric_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a fan file. Axiom violations give `DOMAIN`, with
/// the violation list as JSON in the last error.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toric_fan_from_json(json: *const c_char, out: *mut *mut ToricFan) -> ToricStatus {
    guard(|| {
        nonnull!(out);
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let spec: FanSpec = tri!(serde_json::from_str(text).map_err(ToricError::from));
        match spec.to_fan() {
            Ok(fan) => write_out(out, ToricFan(fan)),
            Err(FanSpecError::Invalid(e)) => fail(e),
            Err(FanSpecError::Violations(v)) => {
                set_error(serde_json::to_string(&v).unwrap_or_default());
                ToricStatus::Domain
            }
        }
    })
}

/// The fan of projective `n`-space.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toric_fan_projective(n: usize, out: *mut *mut ToricFan) -> ToricStatus {
    guard(|| {
        nonnull!(out);
        write_out(out, ToricFan(tri!(projective_fan(n))))
    })
}

/// The Hirzebruch fan with parameter `a ≥ 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toric_fan_hirzebruch(a: i64, out: *mut *mut ToricFan) -> ToricStatus {
    guard(|| {
        nonnull!(out);
        write_out(out, ToricFan(tri!(hirzebruch_fan(a))))
    })
}

/// Number of cones, faces included. Zero for a null handle.
///
/// # Safety
/// `fan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn toric_fan_cone_count(fan: *const ToricFan) -> usize {
    fan.as_ref().map_or(0, |f| f.0.len())
}

/// Whether the support of the fan is all of `N_R`.
///
/// # Safety
/// `fan` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toric_fan_is_complete(fan: *const ToricFan, out: *mut bool) -> ToricStatus {
    guard(|| {
        nonnull!(fan, out);
        *out = (*fan).0.is_complete();
        ToricStatus::Ok
    })
}

/// The face-complete fan file.
///
/// # Safety
/// `fan` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toric_fan_to_json(fan: *const ToricFan, out: *mut *mut c_char) -> ToricStatus {
    guard(|| {
        nonnull!(fan, out);
        write_string(out, tri!(to_json(&(*fan).0.to_spec())))
    })
}

/// # Safety
/// `fan` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn toric_fan_free(fan: *mut ToricFan) {
    if !fan.is_null() {
        drop(Box::from_raw(fan));
    }
}

/// Builds the atlas of a fan. `bound` is the multiplicity bound for
/// localization searches (0 selects the default) and `radius` the box
/// radius for overlap certificates (0 derives it from the input).
///
/// # Safety
/// `fan` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toric_atlas_build(
    fan: *const ToricFan,
    bound: u32,
    radius: i64,
    parallel: bool,
    out: *mut *mut ToricAtlas,
) -> ToricStatus {
    guard(|| {
        nonnull!(fan, out);
        let defaults = AtlasOptions::default();
        let options = AtlasOptions {
            bound: if bound == 0 { defaults.bound } else { bound },
            radius: (radius > 0).then_some(radius),
            parallel,
        };
        write_out(out, ToricAtlas(tri!(build_atlas_with(&(*fan).0, options))))
    })
}

/// # Safety
/// `atlas` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn toric_atlas_chart_count(atlas: *const ToricAtlas) -> usize {
    atlas.as_ref().map_or(0, |a| a.0.charts().len())
}

/// Charts, overlaps, transitions and certificates as JSON.
///
/// # Safety
/// `atlas` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toric_atlas_to_json(atlas: *const ToricAtlas, out: *mut *mut c_char) -> ToricStatus {
    guard(|| {
        nonnull!(atlas, out);
        write_string(out, tri!(to_json(&(*atlas).0.to_json())))
    })
}

/// The reduction mod `prime` with its comparison against the toric scheme.
///
/// # Safety
/// `atlas` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toric_atlas_reduction_json(
    atlas: *const ToricAtlas,
    prime: u64,
    out: *mut *mut c_char,
) -> ToricStatus {
    guard(|| {
        nonnull!(atlas, out);
        let r = tri!(reduction_json(&(*atlas).0, prime));
        write_string(out, tri!(to_json(&r)))
    })
}

/// # Safety
/// `atlas` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn toric_atlas_free(atlas: *mut ToricAtlas) {
    if !atlas.is_null() {
        drop(Box::from_raw(atlas));
    }
}

/// Parses an element file.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toric_element_from_json(json: *const c_char, out: *mut *mut ToricElement) -> ToricStatus {
    guard(|| {
        nonnull!(out);
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let parsed: ElementJson = tri!(serde_json::from_str(text).map_err(ToricError::from));
        write_out(out, ToricElement(tri!(Element::from_json(&parsed))))
    })
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toric_element_multiply(
    a: *const ToricElement,
    b: *const ToricElement,
    out: *mut *mut ToricElement,
) -> ToricStatus {
    guard(|| {
        nonnull!(a, b, out);
        write_out(out, ToricElement(tri!((*a).0.multiply(&(*b).0))))
    })
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toric_element_add(
    a: *const ToricElement,
    b: *const ToricElement,
    out: *mut *mut ToricElement,
) -> ToricStatus {
    guard(|| {
        nonnull!(a, b, out);
        write_out(out, ToricElement(tri!((*a).0.add(&(*b).0))))
    })
}

/// Gauss norm as an exact rational string such as `"1/25"`.
///
/// # Safety
/// `element` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toric_element_gauss_norm(element: *const ToricElement, out: *mut *mut c_char) -> ToricStatus {
    guard(|| {
        nonnull!(element, out);
        write_string(out, (*element).0.gauss_norm().to_string())
    })
}

/// # Safety
/// `element` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toric_element_to_json(element: *const ToricElement, out: *mut *mut c_char) -> ToricStatus {
    guard(|| {
        nonnull!(element, out);
        write_string(out, tri!(to_json(&(*element).0.to_json())))
    })
}

/// # Safety
/// `element` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn toric_element_free(element: *mut ToricElement) {
    if !element.is_null() {
        drop(Box::from_raw(element));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn null_handles_are_reported() {
        let status = unsafe { toric_fan_projective(2, ptr::null_mut()) };
        assert_eq!(status, ToricStatus::NullPointer);
        assert_eq!(unsafe { toric_fan_cone_count(ptr::null()) }, 0);
    }
}
