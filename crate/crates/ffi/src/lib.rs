//! C ABI for cellkit.
//!
//! Handles are opaque and owned by the caller: every `*_new` has a matching `*_free`.
//! Integers that may exceed 64 bits are returned as decimal strings allocated here;
//! release them with `ck_string_free`. After a non-OK status, `ck_last_error` gives
//! a message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cellkit::invariants::{left_cell_count, two_sided_cell_size, ChiTable, DimTable};
use cellkit::partitions::{LieType, Partition};
use cellkit::solver::{solve_even_c, solve_general_sp};
use cellkit::{CellError, Result};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed or non-admissible partition text.
    InvalidPartition = 3,
    /// Out-of-range index, element or character.
    OutOfRange = 4,
    /// The input is valid but outside what the routine handles.
    Unsupported = 5,
    /// A required dimension is absent from a table.
    MissingData = 6,
    /// A computed count came out negative or non-integral.
    ContractViolation = 7,
    /// Other library error.
    Failed = 8,
    /// A panic was caught at the boundary.
    Internal = 9,
}

/// Opaque validated partition.
pub struct CkPartition(Partition);

/// Opaque table of dim V_(s,rho).
pub struct CkDimTable(DimTable);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &CellError) -> CkStatus {
    use CellError::*;
    match e {
        EmptyInput | ParityViolation(_) | InvalidPartition(_) | OrderViolation(_) => CkStatus::InvalidPartition,
        IndexOutOfRange(_) | RangeError(_) | ElementNotInSubgroup(_) | IncompatiblePair(_) => CkStatus::OutOfRange,
        OddPartPresent(_) | DimensionTooLarge(_) | NotDistinguished(_) | UnsupportedSubgroup(_) | EvenPartTooLarge(_)
        | TooManyRows(_) => CkStatus::Unsupported,
        MissingDim(_) | DimensionMismatch(_) | NoFixture(_) => CkStatus::MissingData,
        NegativeResult(_) | NonIntegralAverage(_) => CkStatus::ContractViolation,
        _ => CkStatus::Failed,
    }
}

/// Runs `f`, records any failure, and turns panics into `Internal`.
fn guard(f: impl FnOnce() -> std::result::Result<(), (CkStatus, String)>) -> CkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CkStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal error");
            CkStatus::Internal
        }
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, (CkStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (CkStatus, String) {
    (CkStatus::NullPointer, "null pointer argument".into())
}

unsafe fn c_str<'a>(s: *const c_char) -> std::result::Result<&'a str, (CkStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| (CkStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn deref<'a, T>(p: *const T) -> std::result::Result<&'a T, (CkStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> std::result::Result<(), (CkStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    *out = CString::new(s).map_err(|_| (CkStatus::Failed, "interior NUL".into()))?.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ck_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ck_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a partition such as "2,4,4" for lie type 'B', 'C' or 'D'.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_partition_new(text: *const c_char, lie_type: c_char, out: *mut *mut CkPartition) -> CkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let t = c_str(text)?;
        let lie = match lie_type as u8 {
            b'B' | b'b' => LieType::B,
            b'C' | b'c' => LieType::C,
            b'D' | b'd' => LieType::D,
            other => return Err((CkStatus::InvalidPartition, format!("unknown lie type '{}'", other as char))),
        };
        let p = lib(Partition::parse(t, lie))?;
        *out = Box::into_raw(Box::new(CkPartition(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from `ck_partition_new` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ck_partition_free(p: *mut CkPartition) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of parts; 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ck_partition_rows(p: *const CkPartition) -> usize {
    p.as_ref().map_or(0, |p| p.0.k())
}

/// Euler characteristic of the Springer fiber, as a decimal string.
///
/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_euler(p: *const CkPartition, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        let p = deref(p)?;
        let v = lib(cellkit::euler::euler_characteristic(&p.0))?;
        put_string(out, v.to_string())
    })
}

/// Number of left cells in the two-sided cell of the orbit.
///
/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_left_cells(p: *const CkPartition, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        let p = deref(p)?;
        put_string(out, lib(left_cell_count(&p.0))?.to_string())
    })
}

/// Size of the two-sided cell; distinguished type C partitions only.
///
/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_two_sided_cell_size(p: *const CkPartition, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        let p = deref(p)?;
        put_string(out, lib(two_sided_cell_size(&p.0))?.to_string())
    })
}

/// Orbit multiplicities of Y_e as a JSON array (type C).
///
/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_solve_json(p: *const CkPartition, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        let p = deref(p)?;
        if p.0.lie_type() != LieType::C {
            return Err((CkStatus::Unsupported, "types B and D need an explicit dims table".into()));
        }
        let mv = if p.0.all_even() { lib(solve_even_c(&p.0))? } else { lib(solve_general_sp(&p.0))?.multiplicities };
        put_string(out, mv.to_json().to_string())
    })
}

/// Computes every dim V_(s,rho) for a type C partition.
///
/// # Safety
/// `p` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_dim_table_new(p: *const CkPartition, out: *mut *mut CkDimTable) -> CkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let p = deref(p)?;
        let t = lib(ChiTable::new(&p.0).and_then(|c| c.dim_table()))?;
        *out = Box::into_raw(Box::new(CkDimTable(t)));
        Ok(())
    })
}

/// Reads a table from the JSON rows {"s", "rho", "dim"} used by the CLI.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_dim_table_from_json(json: *const c_char, out: *mut *mut CkDimTable) -> CkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let v: serde_json::Value = serde_json::from_str(c_str(json)?).map_err(|e| (CkStatus::Failed, e.to_string()))?;
        let t = lib(DimTable::from_json(&v))?;
        *out = Box::into_raw(Box::new(CkDimTable(t)));
        Ok(())
    })
}

/// # Safety
/// `t` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ck_dim_table_free(t: *mut CkDimTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Rank k-1 of the group the table is indexed by; 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ck_dim_table_rank(t: *const CkDimTable) -> usize {
    t.as_ref().map_or(0, |t| t.0.k_prime())
}

/// Number of stored (s, rho) entries; 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ck_dim_table_len(t: *const CkDimTable) -> usize {
    t.as_ref().map_or(0, |t| t.0.len())
}

/// dim V_(s,rho); bit m-1 of `s` is z_m and bit m-1 of `rho` set means rho(z_m) = -1.
///
/// # Safety
/// `t` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_dim_table_get(t: *const CkDimTable, s: u32, rho: u32, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        let t = deref(t)?;
        let d = t.0.get(s, rho).ok_or_else(|| (CkStatus::MissingData, format!("no entry for s = {s}, rho = {rho}")))?;
        put_string(out, d.to_string())
    })
}

/// The table as JSON rows.
///
/// # Safety
/// `t` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ck_dim_table_to_json(t: *const CkDimTable, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        let t = deref(t)?;
        put_string(out, t.0.to_json().to_string())
    })
}
