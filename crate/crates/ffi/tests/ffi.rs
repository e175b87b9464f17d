use std::ffi::{c_char, CStr, CString};
use std::ptr;

use toric_rigid_ffi::*;

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { toric_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(toric_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn projective_plane_through_the_c_interface() {
    let mut fan = ptr::null_mut();
    assert_eq!(unsafe { toric_fan_projective(2, &mut fan) }, ToricStatus::Ok);
    assert_eq!(unsafe { toric_fan_cone_count(fan) }, 7);
    let mut complete = false;
    assert_eq!(unsafe { toric_fan_is_complete(fan, &mut complete) }, ToricStatus::Ok);
    assert!(complete);

    let mut atlas = ptr::null_mut();
    assert_eq!(unsafe { toric_atlas_build(fan, 0, 0, true, &mut atlas) }, ToricStatus::Ok);
    assert_eq!(unsafe { toric_atlas_chart_count(atlas) }, 7);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { toric_atlas_reduction_json(atlas, 5, &mut json) }, ToricStatus::Ok);
    let text = take_string(json);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["matches_toric_scheme"], true);

    assert_eq!(unsafe { toric_atlas_reduction_json(atlas, 4, &mut json) }, ToricStatus::Domain);
    assert!(last_error().contains("not prime"));

    unsafe {
        toric_atlas_free(atlas);
        toric_fan_free(fan);
    }
}

#[test]
fn fan_files_and_violations() {
    let good = CString::new(r#"{"rank":2,"cones":[{"id":"q","rays":[[1,0],[0,1]]}],"complete_faces":true}"#).unwrap();
    let mut fan = ptr::null_mut();
    assert_eq!(unsafe { toric_fan_from_json(good.as_ptr(), &mut fan) }, ToricStatus::Ok);
    assert_eq!(unsafe { toric_fan_cone_count(fan) }, 4);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { toric_fan_to_json(fan, &mut json) }, ToricStatus::Ok);
    assert!(take_string(json).contains("\"q\""));
    unsafe { toric_fan_free(fan) };

    let bare = CString::new(r#"{"rank":2,"cones":[{"id":"q","rays":[[1,0],[0,1]]}]}"#).unwrap();
    let mut fan = ptr::null_mut();
    assert_eq!(unsafe { toric_fan_from_json(bare.as_ptr(), &mut fan) }, ToricStatus::Domain);
    let violations: serde_json::Value = serde_json::from_str(&last_error()).unwrap();
    assert_eq!(violations.as_array().unwrap().len(), 3);

    let broken = CString::new("{\"rank\": 2,").unwrap();
    assert_eq!(unsafe { toric_fan_from_json(broken.as_ptr(), &mut fan) }, ToricStatus::Parse);
    assert_eq!(unsafe { toric_fan_from_json(ptr::null(), &mut fan) }, ToricStatus::NullPointer);
}

#[test]
fn element_arithmetic() {
    let quadrant = r#""semigroup":{"sigma":{"rank":2,"rays":[[1,0],[0,1]]}}"#;
    let sum = CString::new(format!(
        r#"{{"prime":5,{quadrant},"terms":[{{"exp":[1,0],"num":"1"}},{{"exp":[0,1],"num":"1"}}]}}"#
    ))
    .unwrap();
    let diff = CString::new(format!(
        r#"{{"prime":5,{quadrant},"terms":[{{"exp":[1,0],"num":"1"}},{{"exp":[0,1],"num":"-1"}}]}}"#
    ))
    .unwrap();
    let (mut a, mut b, mut c) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(toric_element_from_json(sum.as_ptr(), &mut a), ToricStatus::Ok);
        assert_eq!(toric_element_from_json(diff.as_ptr(), &mut b), ToricStatus::Ok);
        assert_eq!(toric_element_multiply(a, b, &mut c), ToricStatus::Ok);
    }
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { toric_element_to_json(c, &mut json) }, ToricStatus::Ok);
    let value: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    let terms: Vec<(String, String)> = value["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["exp"].to_string(), t["num"].as_str().unwrap().to_owned()))
        .collect();
    assert_eq!(
        terms,
        vec![("[0,2]".to_owned(), "-1".to_owned()), ("[2,0]".to_owned(), "1".to_owned())]
    );
    let mut norm = ptr::null_mut();
    assert_eq!(unsafe { toric_element_gauss_norm(c, &mut norm) }, ToricStatus::Ok);
    assert_eq!(take_string(norm), "1");
    unsafe {
        toric_element_free(a);
        toric_element_free(b);
        toric_element_free(c);
    }
}

#[test]
fn version_is_available() {
    let v = unsafe { CStr::from_ptr(toric_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
