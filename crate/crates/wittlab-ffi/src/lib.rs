//! C ABI for wittlab: opaque handles, integer status codes, UTF-8 strings.
//!
//! Conventions:
//! - Functions returning `*mut c_char` allocate; free with
//!   [`wittlab_string_free`]. NULL signals an error; fetch the message with
//!   [`wittlab_last_error`].
//! - Handle types are opaque; every `*_new`/`*_parse` has a matching
//!   `*_free`.
//! - Status codes mirror the CLI: 0 ok, 1 verification failure, 2 usage
//!   error, 3 integrality failure.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};

use num_bigint::BigInt;

use wittlab::error::WittError;
use wittlab::nest::Nest;
use wittlab::ring::RingSpec;
use wittlab::series::BigOneSeries;
use wittlab::univ::{Indexing, StructKind};
use wittlab::witt::WittVec;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &WittError) -> c_int {
    match e {
        WittError::NonIntegral(_)
        | WittError::InexactDivision(_)
        | WittError::NotInvertible(_)
        | WittError::GhostSolve { .. } => 3,
        _ => 2,
    }
}

fn string_out(s: String) -> *mut c_char {
    match CString::new(s) {
        Ok(c) => c.into_raw(),
        Err(_) => {
            set_error("output contained an interior NUL".into());
            std::ptr::null_mut()
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, ()> {
    if ptr.is_null() {
        set_error("null string argument".into());
        return Err(());
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(s),
        Err(_) => {
            set_error("argument is not valid UTF-8".into());
            Err(())
        }
    }
}

/// Message of the most recent error on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wittlab_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|c| c.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Free a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by a wittlab function and not
/// yet freed; NULL is allowed.
#[no_mangle]
pub unsafe extern "C" fn wittlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- Universal polynomials ----

/// Text of the big Witt polynomial w_n.
#[no_mangle]
pub extern "C" fn wittlab_witt_poly_big(n: u64) -> *mut c_char {
    clear_error();
    if n == 0 {
        set_error("index must be >= 1".into());
        return std::ptr::null_mut();
    }
    string_out(format!("{}", wittlab::univ::witt_polynomial_big(n)))
}

/// Text of the p-adic Witt polynomial w_n.
#[no_mangle]
pub extern "C" fn wittlab_witt_poly_padic(p: u64, n: u32) -> *mut c_char {
    clear_error();
    if !wittlab::arith::is_prime(p) {
        set_error(format!("{} is not prime", p));
        return std::ptr::null_mut();
    }
    string_out(format!("{}", wittlab::univ::witt_polynomial_padic(p, n)))
}

fn parse_indexing(flavor: &str, p: u64, bound: u64) -> Result<Indexing, WittError> {
    match flavor {
        "big" => Ok(Indexing::Big(Nest::upto(bound))),
        "padic" | "p-adic" => Ok(Indexing::Padic {
            p,
            len: bound.saturating_sub(1) as u32,
        }),
        other => Err(WittError::Parse(format!("unknown flavor {}", other))),
    }
}

/// JSON of a universal structure-polynomial family. `kind` is one of
/// add, mul, neg, unit, zero, frobeniusN, nmultN, ppowerN; `flavor` is
/// "big" (nest {1..bound}) or "padic" (length `bound`, prime `p`).
///
/// # Safety
/// `kind` and `flavor` must be NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn wittlab_struct_poly_json(
    kind: *const c_char,
    flavor: *const c_char,
    p: u64,
    bound: u64,
) -> *mut c_char {
    clear_error();
    let kind = match read_str(kind) {
        Ok(s) => s,
        Err(()) => return std::ptr::null_mut(),
    };
    let flavor = match read_str(flavor) {
        Ok(s) => s,
        Err(()) => return std::ptr::null_mut(),
    };
    let result = (|| -> Result<String, WittError> {
        let kind = StructKind::parse(kind)?;
        let indexing = parse_indexing(flavor, p, bound)?;
        let fam = wittlab::univ::structure_polys(kind, &indexing)?;
        Ok(serde_json::to_string(&fam.to_json()).expect("serializable"))
    })();
    match result {
        Ok(s) => string_out(s),
        Err(e) => {
            set_error(format!("{}", e));
            std::ptr::null_mut()
        }
    }
}

// ---- Scalar utilities ----

/// Dold realizability test on the first `len` entries: 1 = realizable over
/// Z, 0 = not, negative = error.
///
/// # Safety
/// `values` must point to `len` readable i64 entries.
#[no_mangle]
pub unsafe extern "C" fn wittlab_dold_test(values: *const i64, len: usize) -> c_int {
    clear_error();
    if values.is_null() || len == 0 {
        set_error("need a nonempty sequence".into());
        return -2;
    }
    let seq: Vec<BigInt> = std::slice::from_raw_parts(values, len)
        .iter()
        .map(|&v| BigInt::from(v))
        .collect();
    match wittlab::witt::dold_test(&seq, len) {
        Ok(rep) => {
            if rep.pass() {
                1
            } else {
                0
            }
        }
        Err(e) => {
            set_error(format!("{}", e));
            -status_of(&e)
        }
    }
}

/// Necklace number M(alpha; n) as a decimal string.
#[no_mangle]
pub extern "C" fn wittlab_necklace_number(alpha: i64, n: u64) -> *mut c_char {
    clear_error();
    if n == 0 {
        set_error("index must be >= 1".into());
        return std::ptr::null_mut();
    }
    string_out(wittlab::necklace::necklace_number(&BigInt::from(alpha), n).to_string())
}

/// Teichmueller lift of a mod p in Z/p^k, as a decimal string.
#[no_mangle]
pub extern "C" fn wittlab_teichmuller_lift(a: i64, p: u64, k: u32) -> *mut c_char {
    clear_error();
    if !wittlab::arith::is_prime(p) || k == 0 {
        set_error("need a prime p and k >= 1".into());
        return std::ptr::null_mut();
    }
    string_out(wittlab::witt::teichmuller_lift_mod(&BigInt::from(a), p, k).to_string())
}

// ---- Series handles ----

/// Opaque handle to a one-power-series over the integers.
pub struct WittlabSeries {
    inner: BigOneSeries,
}

/// Parse a series over Z from its coefficient list a_1..a_D.
///
/// # Safety
/// `coeffs` must point to `len` readable i64 entries.
#[no_mangle]
pub unsafe extern "C" fn wittlab_series_new(coeffs: *const i64, len: usize) -> *mut WittlabSeries {
    clear_error();
    if coeffs.is_null() {
        set_error("null coefficient pointer".into());
        return std::ptr::null_mut();
    }
    let z = RingSpec::integers();
    let list: Vec<_> = std::slice::from_raw_parts(coeffs, len)
        .iter()
        .map(|&v| z.from_i64(v))
        .collect();
    match BigOneSeries::new(&z, list) {
        Ok(inner) => Box::into_raw(Box::new(WittlabSeries { inner })),
        Err(e) => {
            set_error(format!("{}", e));
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must come from a series-returning wittlab call; NULL is allowed.
#[no_mangle]
pub unsafe extern "C" fn wittlab_series_free(s: *mut WittlabSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

unsafe fn series_ref<'a>(s: *const WittlabSeries) -> Result<&'a BigOneSeries, ()> {
    if s.is_null() {
        set_error("null series handle".into());
        return Err(());
    }
    Ok(&(*s).inner)
}

/// Formatted text "1 + a1*t + ..." of the series.
///
/// # Safety
/// `s` must be a live series handle.
#[no_mangle]
pub unsafe extern "C" fn wittlab_series_format(s: *const WittlabSeries) -> *mut c_char {
    clear_error();
    match series_ref(s) {
        Ok(series) => string_out(format!("{}", series)),
        Err(()) => std::ptr::null_mut(),
    }
}

/// JSON {"ring": ..., "order": D, "coeffs": [...]} of the series.
///
/// # Safety
/// `s` must be a live series handle.
#[no_mangle]
pub unsafe extern "C" fn wittlab_series_to_json(s: *const WittlabSeries) -> *mut c_char {
    clear_error();
    match series_ref(s) {
        Ok(series) => string_out(serde_json::to_string(&series.to_json()).expect("serializable")),
        Err(()) => std::ptr::null_mut(),
    }
}

/// Group law (series product): a +_Lambda b at the joint order.
///
/// # Safety
/// `a` and `b` must be live series handles.
#[no_mangle]
pub unsafe extern "C" fn wittlab_series_add(
    a: *const WittlabSeries,
    b: *const WittlabSeries,
) -> *mut WittlabSeries {
    clear_error();
    let (a, b) = match (series_ref(a), series_ref(b)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return std::ptr::null_mut(),
    };
    match wittlab::series::lambda_add(a, b) {
        Ok(inner) => Box::into_raw(Box::new(WittlabSeries { inner })),
        Err(e) => {
            set_error(format!("{}", e));
            std::ptr::null_mut()
        }
    }
}

/// Witt multiplication a *_W b at the joint order.
///
/// # Safety
/// `a` and `b` must be live series handles.
#[no_mangle]
pub unsafe extern "C" fn wittlab_series_witt_product(
    a: *const WittlabSeries,
    b: *const WittlabSeries,
) -> *mut WittlabSeries {
    clear_error();
    let (a, b) = match (series_ref(a), series_ref(b)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return std::ptr::null_mut(),
    };
    match wittlab::series::witt_product(a, b) {
        Ok(inner) => Box::into_raw(Box::new(WittlabSeries { inner })),
        Err(e) => {
            set_error(format!("{}", e));
            std::ptr::null_mut()
        }
    }
}

/// Frobenius f_n of the series (output order floor(D/n)).
///
/// # Safety
/// `s` must be a live series handle.
#[no_mangle]
pub unsafe extern "C" fn wittlab_series_frobenius(
    s: *const WittlabSeries,
    n: u64,
) -> *mut WittlabSeries {
    clear_error();
    let series = match series_ref(s) {
        Ok(x) => x,
        Err(()) => return std::ptr::null_mut(),
    };
    if n == 0 {
        set_error("Frobenius index must be >= 1".into());
        return std::ptr::null_mut();
    }
    match wittlab::series::series_frobenius(n, series) {
        Ok(inner) => Box::into_raw(Box::new(WittlabSeries { inner })),
        Err(e) => {
            set_error(format!("{}", e));
            std::ptr::null_mut()
        }
    }
}

/// Witt coordinates of the series as JSON.
///
/// # Safety
/// `s` must be a live series handle.
#[no_mangle]
pub unsafe extern "C" fn wittlab_series_to_witt_json(s: *const WittlabSeries) -> *mut c_char {
    clear_error();
    let series = match series_ref(s) {
        Ok(x) => x,
        Err(()) => return std::ptr::null_mut(),
    };
    match wittlab::series::to_witt(series) {
        Ok(w) => string_out(serde_json::to_string(&w.to_json()).expect("serializable")),
        Err(e) => {
            set_error(format!("{}", e));
            std::ptr::null_mut()
        }
    }
}

/// Necklace coordinates as JSON {"coords": [...], "integral": bool}.
///
/// # Safety
/// `s` must be a live series handle.
#[no_mangle]
pub unsafe extern "C" fn wittlab_series_to_necklace_json(s: *const WittlabSeries) -> *mut c_char {
    clear_error();
    let series = match series_ref(s) {
        Ok(x) => x,
        Err(()) => return std::ptr::null_mut(),
    };
    match wittlab::series::to_necklace(series) {
        Ok((coords, integral)) => {
            let cs: Vec<String> = coords.iter().map(|c| format!("{}", c)).collect();
            string_out(serde_json::json!({"coords": cs, "integral": integral}).to_string())
        }
        Err(e) => {
            set_error(format!("{}", e));
            std::ptr::null_mut()
        }
    }
}

// ---- Witt vector handles ----

/// Opaque handle to an integer Witt vector on the nest {1..N}.
pub struct WittlabWittVec {
    inner: WittVec,
}

/// Build an integer Witt vector on {1..len} from its coordinates.
///
/// # Safety
/// `coords` must point to `len` readable i64 entries.
#[no_mangle]
pub unsafe extern "C" fn wittlab_wittvec_new(
    coords: *const i64,
    len: usize,
) -> *mut WittlabWittVec {
    clear_error();
    if coords.is_null() || len == 0 {
        set_error("need at least one coordinate".into());
        return std::ptr::null_mut();
    }
    let z = RingSpec::integers();
    let list: Vec<_> = std::slice::from_raw_parts(coords, len)
        .iter()
        .map(|&v| z.from_i64(v))
        .collect();
    match WittVec::from_list(&z, Indexing::Big(Nest::upto(len as u64)), &list) {
        Ok(inner) => Box::into_raw(Box::new(WittlabWittVec { inner })),
        Err(e) => {
            set_error(format!("{}", e));
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `w` must come from a wittvec-returning wittlab call; NULL is allowed.
#[no_mangle]
pub unsafe extern "C" fn wittlab_wittvec_free(w: *mut WittlabWittVec) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

unsafe fn wittvec_ref<'a>(w: *const WittlabWittVec) -> Result<&'a WittVec, ()> {
    if w.is_null() {
        set_error("null Witt vector handle".into());
        return Err(());
    }
    Ok(&(*w).inner)
}

/// Witt-ring operation on integer vectors: op is one of "add", "mul", "sub".
///
/// # Safety
/// `a` and `b` must be live Witt vector handles.
#[no_mangle]
pub unsafe extern "C" fn wittlab_wittvec_arith(
    op: *const c_char,
    a: *const WittlabWittVec,
    b: *const WittlabWittVec,
) -> *mut WittlabWittVec {
    clear_error();
    let op = match read_str(op) {
        Ok(s) => s,
        Err(()) => return std::ptr::null_mut(),
    };
    let (a, b) = match (wittvec_ref(a), wittvec_ref(b)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return std::ptr::null_mut(),
    };
    let result = match op {
        "add" => wittlab::witt::witt_add(a, b),
        "mul" => wittlab::witt::witt_mul(a, b),
        "sub" => wittlab::witt::witt_sub(a, b),
        other => Err(WittError::Parse(format!("unknown op {}", other))),
    };
    match result {
        Ok(inner) => Box::into_raw(Box::new(WittlabWittVec { inner })),
        Err(e) => {
            set_error(format!("{}", e));
            std::ptr::null_mut()
        }
    }
}

/// Ghost components as a JSON list of decimal strings.
///
/// # Safety
/// `w` must be a live Witt vector handle.
#[no_mangle]
pub unsafe extern "C" fn wittlab_wittvec_ghost_json(w: *const WittlabWittVec) -> *mut c_char {
    clear_error();
    let x = match wittvec_ref(w) {
        Ok(x) => x,
        Err(()) => return std::ptr::null_mut(),
    };
    match wittlab::witt::ghost(x) {
        Ok(g) => {
            let values: Vec<String> = g
                .indexing
                .indices()
                .iter()
                .map(|i| format!("{}", g.values[i]))
                .collect();
            string_out(serde_json::json!(values).to_string())
        }
        Err(e) => {
            set_error(format!("{}", e));
            std::ptr::null_mut()
        }
    }
}

/// JSON of the vector: {"ring": ..., "nest": [...], "coords": {...}}.
///
/// # Safety
/// `w` must be a live Witt vector handle.
#[no_mangle]
pub unsafe extern "C" fn wittlab_wittvec_to_json(w: *const WittlabWittVec) -> *mut c_char {
    clear_error();
    match wittvec_ref(w) {
        Ok(x) => string_out(serde_json::to_string(&x.to_json()).expect("serializable")),
        Err(()) => std::ptr::null_mut(),
    }
}

// ---- Verification suites ----

/// Run a named verification suite. Returns 0 when every check passes,
/// 1 on a failed check, 2 on an unknown suite name.
///
/// # Safety
/// `name` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn wittlab_verify_suite(name: *const c_char) -> c_int {
    clear_error();
    let name = match read_str(name) {
        Ok(s) => s,
        Err(()) => return 2,
    };
    match wittlab::verify::run_suite(name, 8) {
        Ok(suite) => {
            if suite.all_pass() {
                0
            } else {
                set_error(format!(
                    "suite {} failed {} checks",
                    name,
                    suite.checks.iter().filter(|c| !c.pass).count()
                ));
                1
            }
        }
        Err(e) => {
            set_error(format!("{}", e));
            2
        }
    }
}

/// One "PASS/FAIL: label" line per check of a named suite.
///
/// # Safety
/// `name` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn wittlab_verify_suite_report(name: *const c_char) -> *mut c_char {
    clear_error();
    let name = match read_str(name) {
        Ok(s) => s,
        Err(()) => return std::ptr::null_mut(),
    };
    match wittlab::verify::run_suite(name, 8) {
        Ok(suite) => {
            let mut out = String::new();
            for check in &suite.checks {
                out.push_str(if check.pass { "PASS: " } else { "FAIL: " });
                out.push_str(&check.label);
                out.push('\n');
            }
            string_out(out)
        }
        Err(e) => {
            set_error(format!("{}", e));
            std::ptr::null_mut()
        }
    }
}
