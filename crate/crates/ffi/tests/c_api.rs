use std::ffi::{c_char, CStr, CString};
use std::ptr;

use trigonal_sigma_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ts_last_error()) }.to_string_lossy().into_owned()
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { ts_string_free(s) };
    out
}

fn build(grade: u32) -> *mut TsSigma {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ts_sigma_build(grade, ptr::null(), &mut h) }, TsStatus::Ok, "{}", last_error());
    h
}

#[test]
fn build_verify_and_round_trip() {
    let h = build(5);
    let mut n = 0usize;
    assert_eq!(unsafe { ts_sigma_term_count(h, &mut n) }, TsStatus::Ok);
    assert!(n > 100);

    let rel = CString::new("Q4444 = -3*P33").unwrap();
    let mut report = ptr::null_mut();
    let mut verdict = TsVerdict::Indeterminate;
    assert_eq!(unsafe { ts_verify_relation(h, rel.as_ptr(), &mut report, &mut verdict) }, TsStatus::Ok);
    assert_eq!(verdict, TsVerdict::Pass);
    let report: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
    assert_eq!(report["verdict"], "PASS");

    let bad = CString::new("Q4444 = -3*P33 - l4*P44").unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { ts_verify_relation(h, bad.as_ptr(), &mut report, &mut verdict) }, TsStatus::Ok);
    take(report);
    assert_eq!(verdict, TsVerdict::Fail);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { ts_sigma_to_json(h, &mut json) }, TsStatus::Ok);
    let text = take(json);
    let c = CString::new(text.clone()).unwrap();
    let mut h2 = ptr::null_mut();
    assert_eq!(unsafe { ts_sigma_from_json(c.as_ptr(), &mut h2) }, TsStatus::Ok, "{}", last_error());
    let mut n2 = 0usize;
    assert_eq!(unsafe { ts_sigma_term_count(h2, &mut n2) }, TsStatus::Ok);
    assert_eq!(n, n2);

    let suites = CString::new("controls").unwrap();
    let mut lines = ptr::null_mut();
    let mut exit = -1;
    assert_eq!(unsafe { ts_verify_suite(h2, suites.as_ptr(), &mut lines, &mut exit) }, TsStatus::Ok);
    let lines = take(lines);
    assert_eq!(lines.lines().count(), 7);
    assert_eq!(exit, 0);

    let tampered = text.replacen("\"1\"", "\"2\"", 1);
    assert_ne!(tampered, text);
    let c = CString::new(tampered).unwrap();
    let mut h3 = ptr::null_mut();
    let st = unsafe { ts_sigma_from_json(c.as_ptr(), &mut h3) };
    assert_ne!(st, TsStatus::Ok);
    assert!(h3.is_null());
    assert!(!last_error().is_empty());

    unsafe {
        ts_sigma_free(h);
        ts_sigma_free(h2);
    }
}

#[test]
fn error_codes() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ts_sigma_build(2, ptr::null(), ptr::null_mut()) }, TsStatus::NullPointer);
    assert_eq!(unsafe { ts_sigma_build(0, ptr::null(), &mut h) }, TsStatus::Config);

    let junk = CString::new("three").unwrap();
    let lambdas: [*const c_char; 5] = [junk.as_ptr(), ptr::null(), ptr::null(), ptr::null(), ptr::null()];
    assert_eq!(unsafe { ts_sigma_build(2, lambdas.as_ptr(), &mut h) }, TsStatus::Config);
    assert!(last_error().contains("three"));

    let bytes = [0xffu8 as c_char, 0];
    assert_eq!(unsafe { ts_sigma_from_json(bytes.as_ptr(), &mut h) }, TsStatus::InvalidUtf8);
    let not_json = CString::new("{").unwrap();
    assert_eq!(unsafe { ts_sigma_from_json(not_json.as_ptr(), &mut h) }, TsStatus::Schema);

    let mut n = 0usize;
    assert_eq!(unsafe { ts_sigma_term_count(ptr::null(), &mut n) }, TsStatus::NullPointer);

    let zero = CString::new("0").unwrap();
    let sym = CString::new("symbolic").unwrap();
    let lambdas: [*const c_char; 5] = [zero.as_ptr(), zero.as_ptr(), zero.as_ptr(), sym.as_ptr(), zero.as_ptr()];
    assert_eq!(unsafe { ts_sigma_build(2, lambdas.as_ptr(), &mut h) }, TsStatus::Ok);
    assert!(last_error().is_empty());

    let rel = CString::new("Q4444 = = P33").unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { ts_verify_relation(h, rel.as_ptr(), &mut report, ptr::null_mut()) }, TsStatus::Parse);
    assert!(report.is_null());
    let suites = CString::new("nonsense").unwrap();
    assert_ne!(unsafe { ts_verify_suite(h, suites.as_ptr(), &mut report, ptr::null_mut()) }, TsStatus::Ok);
    unsafe {
        ts_sigma_free(h);
        ts_sigma_free(ptr::null_mut());
        ts_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/trigonal_sigma.h")).unwrap();
    for name in [
        "ts_sigma_build",
        "ts_sigma_free",
        "ts_sigma_term_count",
        "ts_sigma_to_json",
        "ts_sigma_from_json",
        "ts_verify_relation",
        "ts_verify_suite",
        "ts_string_free",
        "ts_last_error",
        "typedef struct TsSigma TsSigma",
        "TS_STATUS_PROVENANCE = 6",
    ] {
        assert!(h.contains(name), "{name}");
    }
}
