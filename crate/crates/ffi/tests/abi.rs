use std::ffi::{CStr, CString};
use std::ptr;

use lsk_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(lsk_last_error()) }.to_string_lossy().into_owned()
}

fn torus() -> *mut LskPatch {
    let name = CString::new("torus").unwrap();
    let keys = [CString::new("R").unwrap(), CString::new("a").unwrap()];
    let key_ptrs: Vec<_> = keys.iter().map(|k| k.as_ptr()).collect();
    let values = [2.0, 0.5];
    let mut patch = ptr::null_mut();
    let st = unsafe { lsk_patch_new(name.as_ptr(), key_ptrs.as_ptr(), values.as_ptr(), 2, &mut patch) };
    assert_eq!(st, LskStatus::Ok, "{}", last_error());
    patch
}

#[test]
fn inner_product_and_errors() {
    let x = [1.0, 2.0, 3.0, 4.0, 5.0];
    let y = [6.0, 7.0, 8.0, 9.0, 10.0];
    let mut r = 0.0;
    assert_eq!(unsafe { lsk_inner(x.as_ptr(), y.as_ptr(), 5, &mut r) }, LskStatus::Ok);
    assert_eq!(r, -6.0 + 14.0 + 24.0 + 36.0 - 50.0);
    assert!(last_error().is_empty());
    assert_eq!(unsafe { lsk_inner(ptr::null(), y.as_ptr(), 5, &mut r) }, LskStatus::NullPointer);
    assert!(last_error().contains("null"));
    assert_eq!(unsafe { lsk_inner(x.as_ptr(), y.as_ptr(), 4, &mut r) }, LskStatus::DimensionMismatch);
}

#[test]
fn random_transforms_pass_the_check() {
    let n = 3;
    let d = n + 3;
    let mut m = vec![0.0; d * d];
    assert_eq!(unsafe { lsk_random_lie_transform(11, n, 0.5, m.as_mut_ptr(), m.len()) }, LskStatus::Ok);
    let mut ok = false;
    assert_eq!(unsafe { lsk_is_lie_transform(m.as_ptr(), d, 1e-10, &mut ok) }, LskStatus::Ok);
    assert!(ok);
    m[0] += 0.1;
    assert_eq!(unsafe { lsk_is_lie_transform(m.as_ptr(), d, 1e-10, &mut ok) }, LskStatus::Ok);
    assert!(!ok);
    assert_eq!(unsafe { lsk_random_lie_transform(11, n, 0.5, m.as_mut_ptr(), 5) }, LskStatus::DimensionMismatch);
}

#[test]
fn cot_quadruple_has_lie_curvature_minus_one() {
    let r: Vec<f64> = (0..4).map(|k| 1.0 / (std::f64::consts::PI / 8.0 + k as f64 * std::f64::consts::FRAC_PI_4).tan()).collect();
    let s = [1.0; 4];
    let m = [1usize; 4];
    let (mut lc, mut ord, mut canon) = (0.0, [0usize; 4], false);
    let st = unsafe { lsk_lie_curvature(r.as_ptr(), s.as_ptr(), m.as_ptr(), &mut lc, ord.as_mut_ptr(), &mut canon) };
    assert_eq!(st, LskStatus::Ok);
    assert!((lc + 1.0).abs() < 1e-12 && canon);
}

#[test]
fn patch_lifecycle_and_reports() {
    let p = torus();
    let (mut dim, mut len) = (0, 0);
    unsafe {
        assert_eq!(lsk_patch_param_dim(p, &mut dim), LskStatus::Ok);
        assert_eq!(lsk_patch_position_len(p, &mut len), LskStatus::Ok);
    }
    assert_eq!((dim, len), (2, 3));
    let (mut f, mut xi) = ([0.0; 3], [0.0; 3]);
    let u = [0.3, 1.1];
    assert_eq!(unsafe { lsk_patch_eval(p, u.as_ptr(), 2, f.as_mut_ptr(), xi.as_mut_ptr(), 3) }, LskStatus::Ok);
    assert!((xi.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
    assert_eq!(unsafe { lsk_patch_eval(p, u.as_ptr(), 1, f.as_mut_ptr(), xi.as_mut_ptr(), 3) }, LskStatus::DimensionMismatch);

    let grid = [12usize, 12];
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { lsk_patch_analyze(p, grid.as_ptr(), 2, 0, &mut json) }, LskStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { lsk_string_free(json) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["curvature"]["g"], 2);
    assert_eq!(v["curvature"]["dupin"]["is_dupin"], true);

    let mut cyl = ptr::null_mut();
    assert_eq!(unsafe { lsk_patch_construct(p, LskConstruction::Cylinder, 1, 0.0, &mut cyl) }, LskStatus::Ok);
    let grid3 = [6usize, 6, 4];
    assert_eq!(unsafe { lsk_patch_classify(cyl, grid3.as_ptr(), 3, 0, false, &mut json) }, LskStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    unsafe { lsk_string_free(json) };
    assert_eq!(v["input"]["construction"]["kind"], "cylinder");
    assert_eq!(v["reducibility"]["reducible"], "Yes");
    let mut nested = ptr::null_mut();
    assert_eq!(unsafe { lsk_patch_construct(cyl, LskConstruction::Revolution, 1, 0.0, &mut nested) }, LskStatus::InvalidArgument);
    unsafe {
        lsk_patch_free(cyl);
        lsk_patch_free(p);
        lsk_patch_free(ptr::null_mut());
        lsk_string_free(ptr::null_mut());
    }
}

#[test]
fn unknown_generator_and_bad_parameters() {
    let name = CString::new("klein_bottle").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { lsk_patch_new(name.as_ptr(), ptr::null(), ptr::null(), 0, &mut p) }, LskStatus::UnknownGenerator);
    assert!(p.is_null());
    let name = CString::new("torus").unwrap();
    let key = CString::new("a").unwrap();
    let keys = [key.as_ptr()];
    assert_eq!(unsafe { lsk_patch_new(name.as_ptr(), keys.as_ptr(), [-1.0].as_ptr(), 1, &mut p) }, LskStatus::InvalidArgument);
    assert!(!last_error().is_empty());
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(lsk_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
