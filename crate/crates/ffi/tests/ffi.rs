use std::ffi::{CStr, CString};
use std::ptr;

use robin_ffi::*;

fn parse(text: &str) -> *mut RobinFactorization {
    let c = CString::new(text).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { robin_factorization_parse(c.as_ptr(), &mut f) }, RobinError::Ok);
    f
}

fn last_error() -> String {
    let p = robin_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn check_verdicts() {
    let mut v = RobinVerdict::Indeterminate;
    let mut sigma = 0u64;
    unsafe {
        assert_eq!(robin_check(5040, &mut v, &mut sigma), RobinError::Ok);
        assert_eq!((v, sigma), (RobinVerdict::Fails, 19344));
        assert_eq!(robin_check(5041, &mut v, ptr::null_mut()), RobinError::Ok);
        assert_eq!(v, RobinVerdict::Holds);
        assert_eq!(robin_check(2, &mut v, ptr::null_mut()), RobinError::InvalidInput);
        assert_eq!(robin_check(5041, ptr::null_mut(), ptr::null_mut()), RobinError::NullPointer);
    }
    assert!(last_error().contains("null"));
}

#[test]
fn thresholds() {
    let mut e = 0;
    unsafe {
        assert_eq!(robin_exponent_threshold(2, &mut e), RobinError::Ok);
        assert_eq!(e, 17);
        assert_eq!(robin_exponent_threshold(3, &mut e), RobinError::Ok);
        assert_eq!(e, 10);
        assert_eq!(robin_exponent_threshold(1, &mut e), RobinError::InvalidInput);
    }
}

#[test]
fn factorization_round_trip() {
    let f = parse("# comment\n3 2\n2 4\nseg 11 100 1\n");
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(robin_factorization_to_string(f, &mut s), RobinError::Ok);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "2 4\n3 2\nseg 11 100 1\n");
        robin_string_free(s);
        robin_factorization_free(f);
    }
    let bad = CString::new("4 1\n").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { robin_factorization_parse(bad.as_ptr(), &mut f) }, RobinError::InvalidInput);
    assert!(f.is_null());
    let invalid = [0xffu8, 0];
    assert_eq!(unsafe { robin_factorization_parse(invalid.as_ptr().cast(), &mut f) }, RobinError::InvalidUtf8);
}

#[test]
fn from_pairs() {
    let ps = [2u64, 3, 5];
    let es = [3u64, 1, 1];
    let mut f = ptr::null_mut();
    unsafe {
        assert_eq!(robin_factorization_from_pairs(ps.as_ptr(), es.as_ptr(), 3, &mut f), RobinError::Ok);
        robin_factorization_free(f);
        assert_eq!(robin_factorization_from_pairs(ptr::null(), ptr::null(), 0, &mut f), RobinError::Ok);
        robin_factorization_free(f);
        assert_eq!(robin_factorization_from_pairs(ptr::null(), es.as_ptr(), 1, &mut f), RobinError::NullPointer);
    }
}

#[test]
fn certify_witness_and_no_witness() {
    let f = parse("2 3\n3 1\n5 1\n");
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(robin_certify(f, true, false, &mut c), RobinError::Ok);
        assert_eq!(robin_certificate_status(c), RobinCertificateStatus::Certified);
        let (mut p, mut a, mut e) = (0, 0, 0);
        assert!(robin_certificate_witness(c, &mut p, &mut a, &mut e));
        assert_eq!((p, a, e), (2, 3, 17));
        let mut json = ptr::null_mut();
        assert_eq!(robin_certificate_to_json(c, &mut json), RobinError::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(v["status"], "Certified");
        assert_eq!(v["witness"]["p"], 2);
        robin_string_free(json);
        robin_certificate_free(c);
        robin_factorization_free(f);

        let f = parse("2 17\n3 10\n");
        assert_eq!(robin_certify(f, true, false, &mut c), RobinError::Ok);
        assert_eq!(robin_certificate_status(c), RobinCertificateStatus::NoWitness);
        assert!(!robin_certificate_witness(c, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()));
        robin_certificate_free(c);
        robin_factorization_free(f);

        let f = parse("2 3\n");
        assert_eq!(robin_certify(f, false, false, &mut c), RobinError::Ok);
        assert_eq!(robin_certificate_status(c), RobinCertificateStatus::PreconditionUnmet);
        robin_certificate_free(c);
        robin_factorization_free(f);
    }
}

#[test]
fn null_handles() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(robin_certify(ptr::null(), true, false, &mut out), RobinError::NullPointer);
        assert_eq!(robin_certificate_status(ptr::null()), RobinCertificateStatus::Indeterminate);
        robin_certificate_free(ptr::null_mut());
        robin_factorization_free(ptr::null_mut());
        robin_string_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(robin_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
