use std::ffi::{CStr, CString};
use std::ptr;

use hbps_ffi::*;

fn last_error() -> String {
    let p = hbps_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { hbps_string_free(p) };
    s
}

#[test]
fn table_one_row_through_handles() {
    let mut rec = ptr::null_mut();
    let st = unsafe { hbps_record_new(1, 3, -1, 0, 3, 1, 0, HbpsSide::Plus, &mut rec) };
    assert_eq!(st, HbpsStatus::Ok);
    let mut dim = 0;
    assert_eq!(unsafe { hbps_record_dim(rec, &mut dim) }, HbpsStatus::Ok);
    assert_eq!(dim, 12);
    let mut len = 0;
    assert_eq!(unsafe { hbps_record_betti(rec, ptr::null_mut(), 0, &mut len) }, HbpsStatus::Ok);
    assert_eq!(len, 25);
    let mut buf = vec![0u64; len];
    assert_eq!(unsafe { hbps_record_betti(rec, buf.as_mut_ptr(), buf.len(), &mut len) }, HbpsStatus::Ok);
    let even: Vec<u64> = buf.iter().step_by(2).take(7).copied().collect();
    assert_eq!(even, [1, 3, 9, 20, 37, 53, 59]);
    let mut euler = 0;
    assert_eq!(unsafe { hbps_record_euler(rec, &mut euler) }, HbpsStatus::Ok);
    assert_eq!(euler, 305);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { hbps_record_to_json(rec, &mut json) }, HbpsStatus::Ok);
    assert!(take_string(json).contains("\"euler\":305"));
    unsafe { hbps_record_free(rec) };
}

#[test]
fn series_handle() {
    let mut s = ptr::null_mut();
    let st = unsafe { hbps_generating_function(1, 1, 0, 0, 1, 0, HbpsSide::Plus, HbpsWhich::F, 3, 1, &mut s) };
    assert_eq!(st, HbpsStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { hbps_series_term_count(s, &mut n) }, HbpsStatus::Ok);
    assert_eq!(n, 1);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { hbps_series_to_json(s, &mut json) }, HbpsStatus::Ok);
    assert_eq!(take_string(json), r#"{"den":[],"qmax":"3","terms":[["0",[[0,"1"]]]]}"#);
    unsafe { hbps_series_free(s) };

    // the vanishing chamber
    let mut s = ptr::null_mut();
    let st = unsafe { hbps_generating_function(2, 2, 1, 1, 0, 1, HbpsSide::Plus, HbpsWhich::F, 4, 1, &mut s) };
    assert_eq!(st, HbpsStatus::Ok);
    assert_eq!(unsafe { hbps_series_term_count(s, &mut n) }, HbpsStatus::Ok);
    assert_eq!(n, 0);
    unsafe { hbps_series_free(s) };
}

#[test]
fn errors_carry_status_and_message() {
    let mut s = ptr::null_mut();
    let st = unsafe { hbps_generating_function(0, 2, 1, 1, 1, 0, HbpsSide::Plus, HbpsWhich::F, 4, 1, &mut s) };
    assert_eq!(st, HbpsStatus::Lattice);
    assert!(last_error().contains("not supported"));
    assert!(s.is_null());

    let st = unsafe { hbps_generating_function(1, 2, 1, 1, 1, 0, HbpsSide::Plus, HbpsWhich::F, 4, 0, &mut s) };
    assert_eq!(st, HbpsStatus::InvalidArgument);

    let st = unsafe { hbps_generating_function(1, 4, 1, 1, 1, 0, HbpsSide::Plus, HbpsWhich::H, 4, 1, &mut s) };
    assert_eq!(st, HbpsStatus::Invariant);

    let st = unsafe { hbps_generating_function(1, 2, 1, 1, 1, 0, HbpsSide::Plus, HbpsWhich::F, 4, 1, ptr::null_mut()) };
    assert_eq!(st, HbpsStatus::NullPointer);

    let mut dim = 0;
    assert_eq!(unsafe { hbps_record_dim(ptr::null(), &mut dim) }, HbpsStatus::NullPointer);
    assert!(last_error().contains("record"));

    // freeing NULL is a no-op
    unsafe {
        hbps_series_free(ptr::null_mut());
        hbps_record_free(ptr::null_mut());
        hbps_string_free(ptr::null_mut());
    }
}

#[test]
fn errors_are_per_thread() {
    let mut dim = 0;
    assert_eq!(unsafe { hbps_record_dim(ptr::null(), &mut dim) }, HbpsStatus::NullPointer);
    std::thread::spawn(|| assert!(hbps_last_error().is_null())).join().unwrap();
}

#[test]
fn completed_function_and_parsing() {
    let mut out = HbpsComplex::default();
    let st = unsafe { hbps_f2hat(1, 1, 1, 1.0, 1.0, 0.13, 0.02, 0.1, 1.1, &mut out) };
    assert_eq!(st, HbpsStatus::Ok);
    assert!(out.re.is_finite() && out.im.is_finite() && out.tail_bound < 1e-10);
    let st = unsafe { hbps_f2hat(1, 1, 1, 1.0, 1.0, 0.13, 0.02, 0.1, -1.1, &mut out) };
    assert_eq!(st, HbpsStatus::Numeric);

    let text = CString::new("2,1,minus").unwrap();
    let (mut m, mut n, mut side) = (0, 0, HbpsSide::Exact);
    assert_eq!(unsafe { hbps_parse_polarization(text.as_ptr(), &mut m, &mut n, &mut side) }, HbpsStatus::Ok);
    assert_eq!((m, n, side), (2, 1, HbpsSide::Minus));
    let bad = CString::new("1/2,1").unwrap();
    assert_eq!(unsafe { hbps_parse_polarization(bad.as_ptr(), &mut m, &mut n, &mut side) }, HbpsStatus::InvalidArgument);
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(hbps_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
