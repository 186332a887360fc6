//! C ABI over the verification toolkit: opaque table handles, integer error
//! codes, and suite runs returning owned JSON strings.
//!
//! Every function is panic-safe (panics become `G2FK_ERR_INTERNAL`) and
//! null-safe. Strings returned through out-parameters are owned by the
//! caller and must be released with `g2fk_string_free`.

use g2fk::engine::{GroupTable, Model};
use g2fk::field::Fp;
use g2fk::runner::{self, RunConfig, Suite};
use libc::c_char;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Opaque handle to a fully materialized group table.
pub struct G2fkTable {
    inner: GroupTable,
}

/// Success.
pub const G2FK_OK: i32 = 0;
/// A required pointer argument was null.
pub const G2FK_ERR_NULL: i32 = 1;
/// The prime, model, or suite is outside the supported range.
pub const G2FK_ERR_UNSUPPORTED: i32 = 2;
/// An element id argument was not in `[0, order)`.
pub const G2FK_ERR_RANGE: i32 = 3;
/// An invariant was violated while running (internal panic).
pub const G2FK_ERR_INTERNAL: i32 = 4;

/// Model selector: 0 = coordinate ("poly") model, 1 = matrix ("chevalley")
/// model.
fn model_from(tag: u8) -> Option<Model> {
    match tag {
        0 => Some(Model::Poly),
        1 => Some(Model::Chevalley),
        _ => None,
    }
}

fn guarded<F: FnOnce() -> i32>(f: F) -> i32 {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(G2FK_ERR_INTERNAL)
}

/// Builds the order-p^6 group table for `p` in the given model and stores a
/// handle in `*out`. `model` is 0 for the coordinate model (p >= 5 only) or
/// 1 for the matrix model.
#[no_mangle]
pub extern "C" fn g2fk_table_build(p: u32, model: u8, out: *mut *mut G2fkTable) -> i32 {
    if out.is_null() {
        return G2FK_ERR_NULL;
    }
    guarded(|| {
        let Some(model) = model_from(model) else {
            return G2FK_ERR_UNSUPPORTED;
        };
        let Ok(fp) = Fp::new(p) else {
            return G2FK_ERR_UNSUPPORTED;
        };
        if p == 3 && model == Model::Poly {
            return G2FK_ERR_UNSUPPORTED;
        }
        match GroupTable::build(fp, model) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(G2fkTable { inner })) };
                G2FK_OK
            }
            Err(_) => G2FK_ERR_UNSUPPORTED,
        }
    })
}

/// Releases a table handle. Null is accepted and ignored.
#[no_mangle]
pub extern "C" fn g2fk_table_free(t: *mut G2fkTable) {
    if !t.is_null() {
        drop(unsafe { Box::from_raw(t) });
    }
}

/// Number of elements in the table (p^6), or 0 on a null handle.
#[no_mangle]
pub extern "C" fn g2fk_table_order(t: *const G2fkTable) -> u64 {
    if t.is_null() {
        return 0;
    }
    unsafe { &*t }.inner.n as u64
}

/// Group product of element ids `a` and `b`, stored in `*out`.
#[no_mangle]
pub extern "C" fn g2fk_table_mul(t: *const G2fkTable, a: u32, b: u32, out: *mut u32) -> i32 {
    if t.is_null() || out.is_null() {
        return G2FK_ERR_NULL;
    }
    let table = &unsafe { &*t }.inner;
    if a as usize >= table.n || b as usize >= table.n {
        return G2FK_ERR_RANGE;
    }
    guarded(|| {
        unsafe { *out = table.mul(a, b) };
        G2FK_OK
    })
}

/// Group inverse of element id `a`, stored in `*out`.
#[no_mangle]
pub extern "C" fn g2fk_table_inv(t: *const G2fkTable, a: u32, out: *mut u32) -> i32 {
    if t.is_null() || out.is_null() {
        return G2FK_ERR_NULL;
    }
    let table = &unsafe { &*t }.inner;
    if a as usize >= table.n {
        return G2FK_ERR_RANGE;
    }
    guarded(|| {
        unsafe { *out = table.inv(a) };
        G2FK_OK
    })
}

/// Multiplicative order of element id `a`, stored in `*out`.
#[no_mangle]
pub extern "C" fn g2fk_table_element_order(t: *const G2fkTable, a: u32, out: *mut u32) -> i32 {
    if t.is_null() || out.is_null() {
        return G2FK_ERR_NULL;
    }
    let table = &unsafe { &*t }.inner;
    if a as usize >= table.n {
        return G2FK_ERR_RANGE;
    }
    guarded(|| {
        unsafe { *out = table.element_order(a) };
        G2FK_OK
    })
}

/// Runs a verification suite ("structure", "aut", "chevalley", "p3", or
/// "all") and stores the JSON report in `*out_json` as a NUL-terminated
/// string owned by the caller. Failing checks are reported inside the JSON,
/// not through the return code.
#[no_mangle]
pub extern "C" fn g2fk_run_suite(
    p: u32,
    model: u8,
    suite: *const c_char,
    seed: u64,
    out_json: *mut *mut c_char,
) -> i32 {
    if suite.is_null() || out_json.is_null() {
        return G2FK_ERR_NULL;
    }
    guarded(|| {
        let Ok(suite) = unsafe { CStr::from_ptr(suite) }.to_str() else {
            return G2FK_ERR_UNSUPPORTED;
        };
        let Some(suite) = Suite::parse(suite) else {
            return G2FK_ERR_UNSUPPORTED;
        };
        let Some(model) = model_from(model) else {
            return G2FK_ERR_UNSUPPORTED;
        };
        let cfg = RunConfig {
            p,
            model,
            suite,
            seed,
            cache_dir: None,
            timings: false,
        };
        match runner::run(&cfg) {
            Ok(report) => {
                let json = CString::new(report.to_json()).expect("JSON has no NUL bytes");
                unsafe { *out_json = json.into_raw() };
                G2FK_OK
            }
            Err(_) => G2FK_ERR_UNSUPPORTED,
        }
    })
}

/// Releases a string previously returned through an out-parameter. Null is
/// accepted and ignored.
#[no_mangle]
pub extern "C" fn g2fk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn g2fk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lifecycle() {
        let mut t: *mut G2fkTable = std::ptr::null_mut();
        assert_eq!(g2fk_table_build(5, 0, &mut t), G2FK_OK);
        assert_eq!(g2fk_table_order(t), 15_625);
        let mut out = 0u32;
        assert_eq!(g2fk_table_mul(t, 1, 2, &mut out), G2FK_OK);
        let mut inv = 0u32;
        assert_eq!(g2fk_table_inv(t, out, &mut inv), G2FK_OK);
        let mut back = 0u32;
        assert_eq!(g2fk_table_mul(t, out, inv, &mut back), G2FK_OK);
        assert_eq!(back, 0, "identity has id 0");
        assert_eq!(g2fk_table_mul(t, 20_000, 0, &mut out), G2FK_ERR_RANGE);
        g2fk_table_free(t);
    }

    #[test]
    fn rejects_bad_input() {
        let mut t: *mut G2fkTable = std::ptr::null_mut();
        assert_eq!(g2fk_table_build(4, 0, &mut t), G2FK_ERR_UNSUPPORTED);
        assert_eq!(g2fk_table_build(3, 0, &mut t), G2FK_ERR_UNSUPPORTED);
        assert_eq!(g2fk_table_build(5, 9, &mut t), G2FK_ERR_UNSUPPORTED);
        assert_eq!(g2fk_table_build(5, 0, std::ptr::null_mut()), G2FK_ERR_NULL);
        let mut s: *mut c_char = std::ptr::null_mut();
        let bad = CString::new("nope").unwrap();
        assert_eq!(
            g2fk_run_suite(5, 0, bad.as_ptr(), 0, &mut s),
            G2FK_ERR_UNSUPPORTED
        );
    }

    #[test]
    fn run_suite_returns_json() {
        let mut s: *mut c_char = std::ptr::null_mut();
        let suite = CString::new("p3").unwrap();
        assert_eq!(g2fk_run_suite(3, 1, suite.as_ptr(), 0, &mut s), G2FK_OK);
        let json = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
        g2fk_string_free(s);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["p"], 3);
        assert_eq!(v["summary"]["fail"], 0);
    }
}
