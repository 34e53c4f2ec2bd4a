//! C ABI over the `logderham` library.
//!
//! Arrangements cross the boundary as opaque `LdhArrangement` handles built
//! from the JSON arrangement file format. Every fallible call returns an
//! `LdhStatus`; on failure `ldh_last_error` describes the problem until the
//! next call on the same thread. Strings returned by the library must be
//! released with `ldh_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use logderham::arrangement::{flats, mobius_poincare, Arrangement, Lattice};
use logderham::cli::{betti_json, betti_run, lattice_json};
use logderham::derham::twisted_betti;
use logderham::io::ArrangementFile;
use logderham::weights::WeightVector;
use logderham::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LdhStatus {
    Ok = 0,
    /// malformed JSON, invalid arrangement, bad weights
    InvalidInput = 1,
    /// a mathematical invariant failed inside the library
    Internal = 2,
    NullPointer = 3,
    /// the output buffer is too short; the required length is still written
    BufferTooSmall = 4,
    Utf8 = 5,
    Panic = 6,
}

/// Opaque arrangement handle with its intersection lattice.
pub struct LdhArrangement {
    arr: Arrangement,
    lattice: Lattice,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: LdhStatus, msg: impl Into<String>) -> LdhStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> LdhStatus {
    let status = if e.is_internal() {
        LdhStatus::Internal
    } else {
        LdhStatus::InvalidInput
    };
    fail(status, e.to_string())
}

fn guarded(f: impl FnOnce() -> LdhStatus) -> LdhStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(LdhStatus::Panic, "panic inside logderham"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, LdhStatus> {
    if p.is_null() {
        return Err(fail(LdhStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(LdhStatus::Utf8, "string is not valid UTF-8"))
}

unsafe fn read_weights(
    weights: *const *const c_char,
    count: usize,
) -> Result<WeightVector, LdhStatus> {
    if count > 0 && weights.is_null() {
        return Err(fail(LdhStatus::NullPointer, "null weight array"));
    }
    let items = (0..count)
        .map(|i| read_str(*weights.add(i)).map(str::to_owned))
        .collect::<Result<Vec<_>, _>>()?;
    WeightVector::parse(&items).map_err(from_error)
}

unsafe fn write_counts(
    values: &[u64],
    out: *mut u64,
    capacity: usize,
    written: *mut usize,
) -> LdhStatus {
    if written.is_null() {
        return fail(LdhStatus::NullPointer, "null length pointer");
    }
    *written = values.len();
    if capacity < values.len() {
        return fail(
            LdhStatus::BufferTooSmall,
            format!("need room for {} values", values.len()),
        );
    }
    if !values.is_empty() && out.is_null() {
        return fail(LdhStatus::NullPointer, "null output buffer");
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    LdhStatus::Ok
}

unsafe fn write_string(s: String, out: *mut *mut c_char) -> LdhStatus {
    if out.is_null() {
        return fail(LdhStatus::NullPointer, "null output pointer");
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            LdhStatus::Ok
        }
        Err(_) => fail(LdhStatus::Internal, "output contains a nul byte"),
    }
}

macro_rules! handle {
    ($p:expr) => {{
        if $p.is_null() {
            return fail(LdhStatus::NullPointer, "null arrangement handle");
        }
        &*$p
    }};
}

/// Parses an arrangement file (JSON text) into a new handle.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ldh_arrangement_from_json(
    json: *const c_char,
    out: *mut *mut LdhArrangement,
) -> LdhStatus {
    guarded(|| {
        if out.is_null() {
            return fail(LdhStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let arr = match ArrangementFile::from_json(text).and_then(|f| f.arrangement()) {
            Ok(a) => a,
            Err(e) => return from_error(e),
        };
        let lattice = flats(&arr);
        *out = Box::into_raw(Box::new(LdhArrangement { arr, lattice }));
        LdhStatus::Ok
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `arr` must come from `ldh_arrangement_from_json` and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ldh_arrangement_free(arr: *mut LdhArrangement) {
    if !arr.is_null() {
        drop(Box::from_raw(arr));
    }
}

/// Number of variables and of hyperplanes.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ldh_arrangement_size(
    arr: *const LdhArrangement,
    nvars: *mut usize,
    hyperplanes: *mut usize,
) -> LdhStatus {
    guarded(|| {
        let a = handle!(arr);
        if nvars.is_null() || hyperplanes.is_null() {
            return fail(LdhStatus::NullPointer, "null output pointer");
        }
        *nvars = a.arr.nvars();
        *hyperplanes = a.arr.len();
        LdhStatus::Ok
    })
}

/// Betti numbers of the complement with constant coefficients, from the
/// Möbius function. Writes `nvars + 1` values.
///
/// # Safety
/// `out` must have room for `capacity` values; `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ldh_os_betti(
    arr: *const LdhArrangement,
    out: *mut u64,
    capacity: usize,
    written: *mut usize,
) -> LdhStatus {
    guarded(|| {
        let a = handle!(arr);
        let os = mobius_poincare(&a.arr, &a.lattice);
        write_counts(&os.betti, out, capacity, written)
    })
}

/// Twisted Betti numbers for rational weights given as strings such as
/// `"1/2"`. `certified` receives whether the weight conditions hold.
///
/// # Safety
/// `weights` must point to `count` nul-terminated strings; the output
/// pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ldh_twisted_betti(
    arr: *const LdhArrangement,
    weights: *const *const c_char,
    count: usize,
    out: *mut u64,
    capacity: usize,
    written: *mut usize,
    certified: *mut bool,
) -> LdhStatus {
    guarded(|| {
        let a = handle!(arr);
        let w = match read_weights(weights, count)
            .and_then(|w| w.for_arrangement(&a.arr).map_err(from_error))
        {
            Ok(w) => w,
            Err(s) => return s,
        };
        let t = match twisted_betti(&a.arr, &a.lattice, &w) {
            Ok(t) => t,
            Err(e) => return from_error(e),
        };
        if !certified.is_null() {
            *certified = t.certified;
        }
        let values: Vec<u64> = t.betti.iter().map(|&b| b as u64).collect();
        write_counts(&values, out, capacity, written)
    })
}

/// Lattice report as JSON, the same document `logderham lattice --json`
/// prints. Free the result with `ldh_string_free`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ldh_lattice_json(
    arr: *const LdhArrangement,
    out: *mut *mut c_char,
) -> LdhStatus {
    guarded(|| {
        let a = handle!(arr);
        let v = lattice_json(&a.arr, &a.lattice);
        write_string(
            serde_json::to_string(&v).expect("json values serialize"),
            out,
        )
    })
}

/// Betti report as JSON, as printed by `logderham betti --json`.
///
/// # Safety
/// As for `ldh_twisted_betti`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ldh_betti_json(
    arr: *const LdhArrangement,
    weights: *const *const c_char,
    count: usize,
    normalize: bool,
    out: *mut *mut c_char,
) -> LdhStatus {
    guarded(|| {
        let a = handle!(arr);
        let w = match read_weights(weights, count) {
            Ok(w) => w,
            Err(s) => return s,
        };
        match betti_run(&a.arr, &a.lattice, w, None, normalize, None) {
            Ok(run) => write_string(
                serde_json::to_string(&betti_json(&a.arr, &a.lattice, &run))
                    .expect("json values serialize"),
                out,
            ),
            Err(e) => from_error(e),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ldh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn ldh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn ldh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
