use std::ffi::{CStr, CString};
use std::ptr;

use graydeform::examples::{group_model, GroupModelSpec};
use graydeform::exactlinalg::Field;
use graydeform::schema::gray_document;
use graydeform_ffi::*;

fn model_json(field: Field, g: usize, h: usize) -> CString {
    let doc = gray_document(&group_model(&GroupModelSpec::untwisted(field, g, h)).unwrap());
    CString::new(doc.to_json()).unwrap()
}

fn load(json: &CString, field: Option<&str>) -> (GdStatus, *mut GdStructure) {
    let field = field.map(|f| CString::new(f).unwrap());
    let mut h = ptr::null_mut();
    let st = unsafe { gd_structure_load(json.as_ptr(), field.as_ref().map_or(ptr::null(), |f| f.as_ptr()), &mut h) };
    (st, h)
}

fn last_error() -> String {
    let p = gd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn a_loaded_model_validates_and_reports_cohomology() {
    let (st, h) = load(&model_json(Field::prime(2).unwrap(), 1, 2), None);
    assert_eq!(st, GdStatus::Ok);
    let (mut valid, mut n, mut gray) = (false, usize::MAX, false);
    assert_eq!(unsafe { gd_structure_is_gray(h, &mut gray) }, GdStatus::Ok);
    assert!(gray);
    assert_eq!(unsafe { gd_validate(h, &mut valid, &mut n) }, GdStatus::Ok);
    assert!(valid);
    assert_eq!(n, 0);
    let mut betti = usize::MAX;
    let tens = CString::new("tens").unwrap();
    assert_eq!(unsafe { gd_cohomology_dim(h, tens.as_ptr(), 2, &mut betti) }, GdStatus::Ok);
    assert_eq!(betti, 1);
    unsafe { gd_structure_free(h) };
}

#[test]
fn the_oracle_agrees_through_the_abi() {
    let (_, h) = load(&model_json(Field::prime(2).unwrap(), 1, 2), None);
    let mode = CString::new("tens").unwrap();
    let (mut b, mut c, mut agree) = (0, 0, false);
    assert_eq!(unsafe { gd_oracle(h, mode.as_ptr(), 1 << 20, &mut b, &mut c, &mut agree) }, GdStatus::Ok);
    assert_eq!((b, c, agree), (1, 2, true));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { gd_classify_json(h, mode.as_ptr(), &mut s) }, GdStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { gd_string_free(s) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert!(v[0].is_null());
    unsafe { gd_structure_free(h) };
}

#[test]
fn errors_map_to_status_codes() {
    let (st, h) = load(&CString::new("{ not json").unwrap(), None);
    assert_eq!(st, GdStatus::Parse);
    assert!(h.is_null());
    assert!(last_error().contains("line 1"));

    let (st, _) = load(&model_json(Field::Rational, 1, 2), Some("p=4"));
    assert_eq!(st, GdStatus::Parse);

    let (_, h) = load(&model_json(Field::prime(3).unwrap(), 2, 2), None);
    let unit = CString::new("unit").unwrap();
    let (mut b, mut c, mut agree) = (0, 0, false);
    assert_eq!(unsafe { gd_oracle(h, unit.as_ptr(), 1 << 10, &mut b, &mut c, &mut agree) }, GdStatus::ResourceCap);
    let bogus = CString::new("bogus").unwrap();
    let mut betti = 0;
    assert_eq!(unsafe { gd_cohomology_dim(h, bogus.as_ptr(), 2, &mut betti) }, GdStatus::Parse);
    assert_eq!(unsafe { gd_cohomology_dim(h, unit.as_ptr(), 2, ptr::null_mut()) }, GdStatus::NullPointer);
    assert_eq!(unsafe { gd_cohomology_dim(ptr::null(), unit.as_ptr(), 2, &mut betti) }, GdStatus::NullPointer);
    unsafe { gd_structure_free(h) };
    unsafe { gd_structure_free(ptr::null_mut()) };
}

#[test]
fn the_generated_header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/graydeform.h")).unwrap();
    for name in [
        "gd_version",
        "gd_last_error",
        "gd_structure_load",
        "gd_structure_free",
        "gd_structure_is_gray",
        "gd_validate",
        "gd_cohomology_dim",
        "gd_classify_json",
        "gd_oracle",
        "gd_string_free",
        "typedef struct GdStructure GdStructure",
        "GD_STATUS_RESOURCE_CAP = 3",
    ] {
        assert!(header.contains(name), "{name} missing from the header");
    }
    assert!(unsafe { CStr::from_ptr(gd_version()) }.to_str().unwrap().starts_with(env!("CARGO_PKG_VERSION")));
}
