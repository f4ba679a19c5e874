//! Exercise the C ABI the way a foreign caller would: raw pointers in,
//! strings and handles out, explicit frees.

use std::ffi::{CStr, CString};

use wittlab_ffi::*;

fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null(), "unexpected NULL: {}", last_error_text());
    let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
    unsafe { wittlab_string_free(ptr) };
    s
}

fn last_error_text() -> String {
    let ptr = wittlab_last_error();
    if ptr.is_null() {
        return "<no error>".into();
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string()
}

#[test]
fn witt_polynomials() {
    let text = take_string(wittlab_witt_poly_big(6));
    assert_eq!(text, "X1^6 + 2*X2^3 + 3*X3^2 + 6*X6");
    let text2 = take_string(wittlab_witt_poly_padic(2, 2));
    assert_eq!(text2, "X0^4 + 2*X1^2 + 4*X2");
    // error path: index 0
    let bad = wittlab_witt_poly_big(0);
    assert!(bad.is_null());
    assert!(last_error_text().contains(">= 1"));
}

#[test]
fn struct_poly_json() {
    let kind = CString::new("add").unwrap();
    let flavor = CString::new("big").unwrap();
    let json = take_string(unsafe { wittlab_struct_poly_json(kind.as_ptr(), flavor.as_ptr(), 0, 3) });
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed["flavor"], "big");
    assert_eq!(parsed["nest"], serde_json::json!([1, 2, 3]));
    assert_eq!(parsed["integral"], true);
}

#[test]
fn dold_and_scalars() {
    let lucas = [1i64, 3, 4, 7, 11, 18, 29, 47];
    assert_eq!(unsafe { wittlab_dold_test(lucas.as_ptr(), lucas.len()) }, 1);
    let linear = [1i64, 2, 3, 4];
    assert_eq!(unsafe { wittlab_dold_test(linear.as_ptr(), linear.len()) }, 0);
    assert_eq!(take_string(wittlab_necklace_number(2, 6)), "9");
    assert_eq!(take_string(wittlab_teichmuller_lift(2, 5, 3)), "57");
}

#[test]
fn series_handles() {
    // (1 - 2t)^{-1} up to order 4: coefficients 2, 4, 8, 16
    let a = unsafe { wittlab_series_new([2i64, 4, 8, 16].as_ptr(), 4) };
    let b = unsafe { wittlab_series_new([3i64, 9, 27, 81].as_ptr(), 4) };
    assert!(!a.is_null() && !b.is_null());
    let prod = unsafe { wittlab_series_witt_product(a, b) };
    let text = take_string(unsafe { wittlab_series_format(prod) });
    // teich(2) * teich(3) = teich(6): 1 + 6t + 36t^2 + ...
    assert_eq!(text, "1 + 6*t + 36*t^2 + 216*t^3 + 1296*t^4");
    let wj = take_string(unsafe { wittlab_series_to_witt_json(prod) });
    let parsed: serde_json::Value = serde_json::from_str(&wj).unwrap();
    assert_eq!(parsed["coords"]["1"], "6");
    assert_eq!(parsed["coords"]["2"], "0");
    let nj = take_string(unsafe { wittlab_series_to_necklace_json(a) });
    let parsed2: serde_json::Value = serde_json::from_str(&nj).unwrap();
    assert_eq!(parsed2["integral"], true);
    assert_eq!(parsed2["coords"][0], "2");
    unsafe {
        wittlab_series_free(prod);
        wittlab_series_free(a);
        wittlab_series_free(b);
    }
}

#[test]
fn series_frobenius_and_add() {
    let a = unsafe { wittlab_series_new([2i64, 4, 8, 16, 32, 64, 128, 256].as_ptr(), 8) };
    let f2 = unsafe { wittlab_series_frobenius(a, 2) };
    let text = take_string(unsafe { wittlab_series_format(f2) });
    // f_2 (1-2t)^{-1} = (1-4t)^{-1}
    assert_eq!(text, "1 + 4*t + 16*t^2 + 64*t^3 + 256*t^4");
    let sum = unsafe { wittlab_series_add(a, a) };
    let text2 = take_string(unsafe { wittlab_series_format(sum) });
    // (1-2t)^{-2} = 1 + 4t + 12t^2 + ...
    assert!(text2.starts_with("1 + 4*t + 12*t^2"));
    unsafe {
        wittlab_series_free(f2);
        wittlab_series_free(sum);
        wittlab_series_free(a);
    }
}

#[test]
fn wittvec_handles() {
    let a = unsafe { wittlab_wittvec_new([1i64, 1, 1, 1].as_ptr(), 4) };
    let g = take_string(unsafe { wittlab_wittvec_ghost_json(a) });
    assert_eq!(g, r#"["1","3","4","7"]"#);
    let op = CString::new("mul").unwrap();
    let sq = unsafe { wittlab_wittvec_arith(op.as_ptr(), a, a) };
    assert!(!sq.is_null());
    let json = take_string(unsafe { wittlab_wittvec_to_json(sq) });
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    // ghost squares componentwise: (1, 9, 16, 49)
    assert_eq!(parsed["coords"]["1"], "1");
    unsafe {
        wittlab_wittvec_free(sq);
        wittlab_wittvec_free(a);
    }
    // bad op reports an error
    let a2 = unsafe { wittlab_wittvec_new([1i64, 2].as_ptr(), 2) };
    let bad = CString::new("nope").unwrap();
    let r = unsafe { wittlab_wittvec_arith(bad.as_ptr(), a2, a2) };
    assert!(r.is_null());
    assert!(last_error_text().contains("unknown op"));
    unsafe { wittlab_wittvec_free(a2) };
}

#[test]
fn verify_suite_through_ffi() {
    let name = CString::new("r-polys").unwrap();
    assert_eq!(unsafe { wittlab_verify_suite(name.as_ptr()) }, 0);
    let report = take_string(unsafe { wittlab_verify_suite_report(name.as_ptr()) });
    assert!(report.lines().all(|l| l.starts_with("PASS: ")));
    let unknown = CString::new("not-a-suite").unwrap();
    assert_eq!(unsafe { wittlab_verify_suite(unknown.as_ptr()) }, 2);
}
