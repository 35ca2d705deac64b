//! C interface to `qfactor`.
//!
//! Quandles and homomorphisms are opaque heap handles released with their
//! `_free` functions. Every fallible call returns a [`QfStatus`] whose values
//! match the exit codes of the `qfactor` command; the message of the most
//! recent failure on the calling thread is available from [`qf_last_error`].
//! Strings returned by the library are released with [`qf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qfactor::cli::exit_code;
use qfactor::factorize::factor_structural;
use qfactor::format::QuandleFile;
use qfactor::quandle::check_hom;
use qfactor::{Error, Quandle, QuandleHom};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfStatus {
    Ok = 0,
    Parse = 1,
    Axiom = 2,
    Disconnected = 3,
    NotNormal = 4,
    NoFactorization = 5,
    Precondition = 6,
    Internal = 7,
    NullPointer = 8,
}

/// A validated quandle.
pub struct QfQuandle(Quandle);

/// A quandle homomorphism, holding copies of its source and target.
pub struct QfHom(QuandleHom);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error, in_factor: bool) -> QfStatus {
    match exit_code(e, in_factor) {
        1 => QfStatus::Parse,
        2 => QfStatus::Axiom,
        3 => QfStatus::Disconnected,
        4 => QfStatus::NotNormal,
        5 => QfStatus::NoFactorization,
        6 => QfStatus::Precondition,
        _ => QfStatus::Internal,
    }
}

/// Runs `f`, recording errors and converting panics into `Internal`.
fn guard(in_factor: bool, f: impl FnOnce() -> Result<QfStatus, Error>) -> QfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e, in_factor)
        }
        Err(_) => {
            set_error("internal panic".into());
            QfStatus::Internal
        }
    }
}

fn null_pointer(what: &str) -> QfStatus {
    set_error(format!("null pointer: {what}"));
    QfStatus::NullPointer
}

/// The message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a quandle from a row-major `n × n` table with `table[x*n + y] = x ▷ y`.
///
/// # Safety
/// `table` must point to `n * n` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qf_quandle_from_table(n: usize, table: *const usize, out: *mut *mut QfQuandle) -> QfStatus {
    if out.is_null() || (table.is_null() && n > 0) {
        return null_pointer("table or out");
    }
    guard(false, || {
        let flat = if n == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(table, n * n)
        };
        let q = Quandle::from_flat(n, flat)?;
        *out = Box::into_raw(Box::new(QfQuandle(q)));
        Ok(QfStatus::Ok)
    })
}

/// Parses a quandle from the JSON file format.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qf_quandle_from_json(json: *const c_char, out: *mut *mut QfQuandle) -> QfStatus {
    if json.is_null() || out.is_null() {
        return null_pointer("json or out");
    }
    guard(false, || {
        let text = CStr::from_ptr(json).to_str().map_err(|e| Error::Parse(e.to_string()))?;
        let q = QuandleFile::parse(text)?.to_quandle()?;
        *out = Box::into_raw(Box::new(QfQuandle(q)));
        Ok(QfStatus::Ok)
    })
}

/// Writes the quandle in the JSON file format. Release with [`qf_string_free`].
///
/// # Safety
/// `q` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qf_quandle_to_json(q: *const QfQuandle, out: *mut *mut c_char) -> QfStatus {
    if q.is_null() || out.is_null() {
        return null_pointer("quandle or out");
    }
    guard(false, || {
        let text = QuandleFile::from_quandle(&(*q).0, None).to_text();
        *out = CString::new(text).expect("JSON has no nul").into_raw();
        Ok(QfStatus::Ok)
    })
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn qf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `q` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn qf_quandle_free(q: *mut QfQuandle) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Number of elements; 0 for a null handle.
///
/// # Safety
/// `q` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qf_quandle_size(q: *const QfQuandle) -> usize {
    q.as_ref().map_or(0, |q| q.0.size())
}

/// `x ▷ y`, or `SIZE_MAX` when a point is out of range.
///
/// # Safety
/// `q` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qf_quandle_op(q: *const QfQuandle, x: usize, y: usize) -> usize {
    match q.as_ref() {
        Some(q) if x < q.0.size() && y < q.0.size() => q.0.op(x, y),
        _ => usize::MAX,
    }
}

/// # Safety
/// `q` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qf_quandle_is_connected(q: *const QfQuandle) -> bool {
    q.as_ref().is_some_and(|q| q.0.is_connected())
}

/// Order of the inner automorphism group.
///
/// # Safety
/// `q` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qf_quandle_inn_order(q: *const QfQuandle, out: *mut usize) -> QfStatus {
    if q.is_null() || out.is_null() {
        return null_pointer("quandle or out");
    }
    guard(false, || {
        *out = (*q).0.inn()?.order();
        Ok(QfStatus::Ok)
    })
}

/// Checks that `map` (of length `len`) is a homomorphism `source → target`.
/// The handle keeps its own copies of both quandles.
///
/// # Safety
/// `source` and `target` must be live handles, `map` must point to `len`
/// readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qf_hom_new(
    source: *const QfQuandle,
    target: *const QfQuandle,
    map: *const usize,
    len: usize,
    out: *mut *mut QfHom,
) -> QfStatus {
    if source.is_null() || target.is_null() || out.is_null() || (map.is_null() && len > 0) {
        return null_pointer("source, target, map or out");
    }
    guard(false, || {
        let map = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(map, len)
        };
        let h = check_hom(map, &(*source).0, &(*target).0)?;
        *out = Box::into_raw(Box::new(QfHom(h)));
        Ok(QfStatus::Ok)
    })
}

/// # Safety
/// `h` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn qf_hom_free(h: *mut QfHom) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Decides whether the surjection `g` factors as `φ ∘ h` for surjections
/// `g, h` out of the same connected quandle.
///
/// On `QF_STATUS_OK`, `phi` (of capacity `phi_len`, at least the size of
/// the target of `h`) receives the images of φ. On
/// `QF_STATUS_NO_FACTORIZATION`, [`qf_last_error`] names the failed
/// condition and its witness.
///
/// # Safety
/// `g` and `h` must be live handles and `phi` must point to `phi_len`
/// writable values.
#[no_mangle]
pub unsafe extern "C" fn qf_factor(g: *const QfHom, h: *const QfHom, phi: *mut usize, phi_len: usize) -> QfStatus {
    if g.is_null() || h.is_null() || phi.is_null() {
        return null_pointer("g, h or phi");
    }
    guard(true, || {
        let (g, h) = (&(*g).0, &(*h).0);
        let needed = h.target().size();
        if phi_len < needed {
            return Err(Error::Domain(format!("φ needs {needed} slots, got {phi_len}")));
        }
        let cert = factor_structural(g, h)?;
        match (cert.phi, cert.failure) {
            (Some(map), _) => {
                std::slice::from_raw_parts_mut(phi, needed).copy_from_slice(map.map());
                Ok(QfStatus::Ok)
            }
            (None, Some(failure)) => {
                set_error(format!("{}: {failure}", failure.name()));
                Ok(QfStatus::NoFactorization)
            }
            (None, None) => Err(Error::Internal("certificate without map or failure".into())),
        }
    })
}

/// Number of connected quandles of order `n` up to isomorphism, `n ≤ 8`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qf_connected_count(n: usize, out: *mut usize) -> QfStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    guard(false, || {
        let records = qfactor::catalog::enumerate_connected_by_triples(n, qfactor::catalog::MAX_GROUP_ORDER)?;
        *out = records.len();
        Ok(QfStatus::Ok)
    })
}
