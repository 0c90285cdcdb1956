use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use homcalc_ffi::*;

fn owned(s: *mut c_char) -> String {
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { hc_string_free(s) };
    text
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(hc_last_error()) }.to_str().unwrap().to_owned()
}

fn recipe(r: &str) -> *mut HcComplex {
    let r = CString::new(r).unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { hc_complex_from_recipe(r.as_ptr(), &mut c) }, HcStatus::Ok);
    c
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn homology_of_klein_bottle() {
    let c = recipe("klein");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hc_homology(c, 1, 0, &mut out) }, HcStatus::Ok);
    let v = json(&owned(out));
    assert_eq!(v["group"], "Z ⊕ Z/2");
    assert_eq!(v["free_rank"], 1);
    assert_eq!(v["torsion"], json("[2]"));
    assert_eq!(unsafe { hc_homology(c, 2, 2, &mut out) }, HcStatus::Ok);
    assert_eq!(json(&owned(out))["group"], "Z/2");
    unsafe { hc_complex_free(c) };
}

#[test]
fn bockstein_of_lens_generator() {
    let c = recipe("bzp:3:8");
    let mut out = ptr::null_mut();
    let chain = [1i64];
    assert_eq!(
        unsafe { hc_bockstein(c, 4, 3, chain.as_ptr(), 1, &mut out) },
        HcStatus::Ok
    );
    let v = json(&owned(out));
    assert_eq!(v["beta"]["group"], "Z/3");
    assert_eq!(v["beta"]["coordinates"], json("[1]"));
    assert_eq!(v["beta_tilde"]["coordinates"], json("[1]"));
    assert_eq!(v["divided"], json("[1]"));
    unsafe { hc_complex_free(c) };
}

#[test]
fn error_codes_and_messages() {
    let c = recipe("klein");
    let mut out = ptr::null_mut();
    // d(F) = 2a, not a cycle mod 3
    let chain = [1i64];
    assert_eq!(
        unsafe { hc_bockstein(c, 2, 3, chain.as_ptr(), 1, &mut out) },
        HcStatus::Math
    );
    assert!(last_error().contains("not a cycle"), "{}", last_error());
    assert_eq!(unsafe { hc_homology(c, 7, 0, &mut out) }, HcStatus::Math);
    assert_eq!(
        unsafe { hc_homology(ptr::null(), 0, 0, &mut out) },
        HcStatus::NullPointer
    );
    assert_eq!(unsafe { hc_homology(c, 0, 0, ptr::null_mut()) }, HcStatus::NullPointer);
    unsafe { hc_complex_free(c) };

    let bad = CString::new("lens:3").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { hc_complex_from_recipe(bad.as_ptr(), &mut h) }, HcStatus::Parse);
    assert!(h.is_null());
    let not_utf8 = [0xffu8, 0];
    assert_eq!(
        unsafe { hc_complex_from_recipe(not_utf8.as_ptr().cast(), &mut h) },
        HcStatus::Utf8
    );

    let nonchain =
        CString::new(r#"{"name":"x","cells":{"0":["v"],"1":["e"],"2":["f"]},"boundaries":{"1":[[1]],"2":[[1]]}}"#)
            .unwrap();
    assert_eq!(
        unsafe { hc_complex_from_json(nonchain.as_ptr(), &mut h) },
        HcStatus::Validation
    );
    let garbage = CString::new("{").unwrap();
    assert_eq!(
        unsafe { hc_complex_from_json(garbage.as_ptr(), &mut h) },
        HcStatus::Parse
    );
}

#[test]
fn json_round_trip() {
    let c = recipe("lens:3:2");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hc_complex_to_json(c, &mut out) }, HcStatus::Ok);
    let doc = CString::new(owned(out)).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { hc_complex_from_json(doc.as_ptr(), &mut d) }, HcStatus::Ok);
    assert_eq!(unsafe { hc_homology(d, 1, 0, &mut out) }, HcStatus::Ok);
    assert_eq!(json(&owned(out))["group"], "Z/3");
    unsafe {
        hc_complex_free(c);
        hc_complex_free(d);
        hc_complex_free(ptr::null_mut());
        hc_string_free(ptr::null_mut());
    }
}

#[test]
fn verify_suite() {
    let c = recipe("bzp:3:6");
    let suite = CString::new("les").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { hc_verify(c, suite.as_ptr(), 3, 7, 5, &mut out) }, HcStatus::Ok);
    let v = json(&owned(out));
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 7);
    let unknown = CString::new("sideways").unwrap();
    assert_eq!(
        unsafe { hc_verify(c, unknown.as_ptr(), 3, 7, 5, &mut out) },
        HcStatus::Parse
    );
    unsafe { hc_complex_free(c) };
}

#[test]
fn header_lists_every_export() {
    let header = include_str!("../include/homcalc.h");
    for f in [
        "hc_complex_from_recipe",
        "hc_complex_from_json",
        "hc_complex_free",
        "hc_complex_to_json",
        "hc_string_free",
        "hc_homology",
        "hc_bockstein",
        "hc_verify",
        "hc_last_error",
        "hc_version",
        "typedef struct HcComplex HcComplex",
        "HC_STATUS_MATH = 4",
    ] {
        assert!(header.contains(f), "{f}");
    }
    let v = unsafe { CStr::from_ptr(hc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
