use std::ffi::{CStr, CString};
use std::ptr;

use qlab_ffi::*;

fn last_error() -> String {
    let p = qlab_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn take(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    qlab_string_free(p);
    s
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(qlab_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn expand_and_read_back() {
    let e = CString::new("f2/f1").unwrap();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(qlab_expand(e.as_ptr(), 6, 0, &mut s), QlabStatus::Ok);
        assert_eq!(qlab_series_len(s), 6);
        assert_eq!(qlab_series_modulus(s), 0);
        let got: Vec<i64> = (0..6)
            .map(|i| {
                let mut v = 0;
                assert_eq!(qlab_series_coeff_i64(s, i, &mut v), QlabStatus::Ok);
                v
            })
            .collect();
        assert_eq!(got, [1, 1, 1, 2, 2, 3]);
        let mut v = 0;
        assert_eq!(qlab_series_coeff_i64(s, 6, &mut v), QlabStatus::InvalidArgument);
        qlab_series_free(s);
    }
}

#[test]
fn rational_coefficients_as_text() {
    let e = CString::new("(1/8) f1").unwrap();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(qlab_expand(e.as_ptr(), 3, 0, &mut s), QlabStatus::Ok);
        let mut v = 0;
        assert_eq!(qlab_series_coeff_i64(s, 1, &mut v), QlabStatus::InvalidArgument);
        let mut out = ptr::null_mut();
        assert_eq!(qlab_series_coeff_string(s, 1, &mut out), QlabStatus::Ok);
        assert_eq!(take(out), "-1/8");
        qlab_series_free(s);
    }
}

#[test]
fn dsome_mod_4() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(qlab_dsome_series(8, 4, &mut s), QlabStatus::Ok);
        assert_eq!(qlab_series_modulus(s), 4);
        let got: Vec<i64> = (0..8)
            .map(|i| {
                let mut v = -1;
                qlab_series_coeff_i64(s, i, &mut v);
                v
            })
            .collect();
        assert_eq!(got, [0, 1, 2, 2, 0, 3, 0, 3]);
        qlab_series_free(s);
        assert_eq!(qlab_dsome_series(8, 1, &mut s), QlabStatus::InvalidArgument);
    }
}

#[test]
fn errors_are_reported() {
    let mut s = ptr::null_mut();
    let bad = CString::new("f1 +* f2").unwrap();
    unsafe {
        assert_eq!(qlab_expand(bad.as_ptr(), 4, 0, &mut s), QlabStatus::ParseError);
        assert!(last_error().contains("byte 4"));
        assert_eq!(qlab_expand(ptr::null(), 4, 0, &mut s), QlabStatus::NullPointer);
        let f = CString::new("f1").unwrap();
        assert_eq!(qlab_expand(f.as_ptr(), 4, 0, ptr::null_mut()), QlabStatus::NullPointer);
        assert_eq!(qlab_expand(f.as_ptr(), 2_000_000, 0, &mut s), QlabStatus::ResourceLimit);
        let invalid = [0xffu8, 0];
        assert_eq!(qlab_expand(invalid.as_ptr().cast(), 4, 0, &mut s), QlabStatus::InvalidUtf8);
        assert_eq!(qlab_series_len(ptr::null()), 0);
        qlab_series_free(ptr::null_mut());
        qlab_string_free(ptr::null_mut());
    }
}

#[test]
fn identities_and_claims() {
    let mut out = ptr::null_mut();
    unsafe {
        let id = CString::new("rr-G").unwrap();
        assert_eq!(qlab_verify_identity(id.as_ptr(), 100, &mut out), QlabStatus::Ok);
        assert!(take(out).contains("\"status\":\"Holds\""));
        let id = CString::new("nope").unwrap();
        assert_eq!(qlab_verify_identity(id.as_ptr(), 100, &mut out), QlabStatus::UnknownIdentity);

        let c = CString::new("DSOME[25n+6] == 0 mod 4").unwrap();
        assert_eq!(qlab_check_claim(c.as_ptr(), 200, &mut out), QlabStatus::Ok);
        take(out);
        let c = CString::new("DSOME[4n+1] == 0 mod 4").unwrap();
        assert_eq!(qlab_check_claim(c.as_ptr(), 10, &mut out), QlabStatus::FailureFound);
        let report = take(out);
        assert!(report.contains("\"fail_index\":0"), "{report}");
        let c = CString::new("DSOME[4n] = 0 mod 4").unwrap();
        assert_eq!(qlab_check_claim(c.as_ptr(), 10, &mut out), QlabStatus::ParseError);
        let c = CString::new("DSOME[999999n] == 0 mod 4").unwrap();
        assert_eq!(qlab_check_claim(c.as_ptr(), 10, &mut out), QlabStatus::ResourceLimit);
    }
}

#[test]
fn whole_corpus() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(qlab_verify_all_json(60, &mut out), QlabStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert!(v.as_array().unwrap().len() > 40);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qlab.h")).unwrap();
    for name in [
        "qlab_version",
        "qlab_last_error_message",
        "qlab_expand",
        "qlab_dsome_series",
        "qlab_series_len",
        "qlab_series_modulus",
        "qlab_series_coeff_i64",
        "qlab_series_coeff_string",
        "qlab_series_free",
        "qlab_string_free",
        "qlab_verify_identity",
        "qlab_check_claim",
        "qlab_verify_all_json",
        "typedef struct QlabSeries QlabSeries",
        "QLAB_STATUS_FAILURE_FOUND = 5",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
