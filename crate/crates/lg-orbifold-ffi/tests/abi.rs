use std::ffi::{CStr, CString};
use std::ptr;

use lg_orbifold_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    lgo_string_free(s);
    out
}

unsafe fn parse(text: &str) -> *mut LgoPolynomial {
    let c = CString::new(text).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(lgo_polynomial_parse(c.as_ptr(), &mut p), LgoStatus::Ok);
    p
}

#[test]
fn polynomial_round_trip() {
    unsafe {
        let p = parse("x^3 + y^2");
        assert_eq!(lgo_polynomial_nvars(p), 2);
        let mut w = [0u64; 2];
        let mut h = 0u64;
        assert_eq!(lgo_weights(p, w.as_mut_ptr(), 2, &mut h), LgoStatus::Ok);
        assert_eq!((w, h), ([2, 3], 6));

        let mut s = ptr::null_mut();
        assert_eq!(lgo_symmetry_order(p, &mut s), LgoStatus::Ok);
        assert_eq!(take(s), "6");
        assert_eq!(lgo_transpose(p, &mut s), LgoStatus::Ok);
        assert_eq!(take(s), "x^3 + y^2");
        lgo_polynomial_free(p);
    }
}

#[test]
fn principal_index_of_a_quadric_is_zero() {
    unsafe {
        let p = parse("x1^2 + x2^2");
        let mut s = ptr::null_mut();
        assert_eq!(lgo_principal_mu(p, &mut s), LgoStatus::Ok);
        assert_eq!(take(s), "0");
        lgo_polynomial_free(p);
    }
}

#[test]
fn errors_set_a_message() {
    unsafe {
        let bad = CString::new("x^^2").unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(lgo_polynomial_parse(bad.as_ptr(), &mut p), LgoStatus::InvalidInput);
        assert!(p.is_null());
        assert!(!lgo_last_error().is_null());

        assert_eq!(lgo_polynomial_parse(ptr::null(), &mut p), LgoStatus::NullPointer);

        let q = parse("x^3 + y^2");
        let mut w = [0u64; 1];
        let mut h = 0;
        assert_eq!(lgo_weights(q, w.as_mut_ptr(), 1, &mut h), LgoStatus::BufferTooSmall);
        let msg = CStr::from_ptr(lgo_last_error()).to_str().unwrap();
        assert!(msg.contains('2'), "{msg}");
        lgo_polynomial_free(q);
        lgo_polynomial_free(ptr::null_mut());
    }
}

#[test]
fn cut_counts() {
    unsafe {
        let mut c = 0;
        assert_eq!(lgo_cut_count(2, ptr::null(), 0, &mut c), LgoStatus::Ok);
        assert_eq!(c, 3);
        let f = [1usize, 2];
        assert_eq!(lgo_cut_count(2, f.as_ptr(), 2, &mut c), LgoStatus::Ok);
        assert_eq!(c, 7);
        let bad = [3usize];
        assert_eq!(lgo_cut_count(2, bad.as_ptr(), 1, &mut c), LgoStatus::InvalidInput);
    }
}

#[test]
fn ainfty_report_is_json() {
    unsafe {
        let d = CString::new("0").unwrap();
        let mut passes = false;
        let mut s = ptr::null_mut();
        assert_eq!(lgo_verify_ainfty(3, ptr::null(), 0, d.as_ptr(), 0, &mut passes, &mut s), LgoStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["structure_ok"], true);
        assert_eq!(v["passes"], passes);
    }
}

#[test]
fn matrix_factorization_handle() {
    unsafe {
        let json = CString::new(r#"{"potential":"x*y","A":[["x"]],"B":[["y"]]}"#).unwrap();
        let mut m = ptr::null_mut();
        assert_eq!(lgo_mf_from_json(json.as_ptr(), &mut m), LgoStatus::Ok);
        assert_eq!(lgo_mf_rank(m), 1);
        let mut ok = false;
        assert_eq!(lgo_mf_check(m, &mut ok), LgoStatus::Ok);
        assert!(ok);
        lgo_mf_free(m);

        let wrong = CString::new(r#"{"potential":"x*y","A":[["x"]],"B":[["x"]]}"#).unwrap();
        assert_eq!(lgo_mf_from_json(wrong.as_ptr(), &mut m), LgoStatus::Ok);
        assert_eq!(lgo_mf_check(m, &mut ok), LgoStatus::Ok);
        assert!(!ok);
        lgo_mf_free(m);
    }
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/lg_orbifold.h")).unwrap();
    for f in [
        "lgo_last_error",
        "lgo_string_free",
        "lgo_polynomial_parse",
        "lgo_polynomial_free",
        "lgo_weights",
        "lgo_symmetry_order",
        "lgo_transpose",
        "lgo_principal_mu",
        "lgo_cut_count",
        "lgo_verify_ainfty",
        "lgo_mf_from_json",
        "lgo_mf_free",
        "lgo_mf_rank",
        "lgo_mf_check",
    ] {
        assert!(h.contains(&format!("{f}(")), "{f} missing from header");
    }
}
