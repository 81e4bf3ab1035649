use std::ffi::{CStr, CString};
use std::ptr;

use ssg_ffi::*;

fn family(token: &str) -> *mut SsgGraph {
    let t = CString::new(token).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ssg_family_build(t.as_ptr(), &mut g) }, SsgStatus::Ok);
    g
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ssg_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn shape_and_verdict_of_gamma9() {
    let g = family("gamma9");
    let (mut w, mut u, mut e) = (0, 0, 0);
    unsafe {
        assert_eq!(ssg_graph_shape(g, &mut w, &mut u, &mut e), SsgStatus::Ok);
        assert_eq!((w, u, e), (27, 27, 243));
        let mut v = 7;
        assert_eq!(ssg_graph_semisymmetry(g, SsgMode::Full, &mut v), SsgStatus::Ok);
        assert_eq!(v, SSG_YES);
        assert_eq!(ssg_graph_semisymmetry(g, SsgMode::Certificate, &mut v), SsgStatus::Ok);
        assert_eq!(v, SSG_YES);
        ssg_graph_free(g);
    }
}

#[test]
fn text_round_trip_and_isomorphism() {
    let a = family("sigma3small");
    unsafe {
        let mut text = ptr::null_mut();
        assert_eq!(ssg_graph_to_text(a, &mut text), SsgStatus::Ok);
        let mut b = ptr::null_mut();
        assert_eq!(ssg_graph_from_text(text, &mut b), SsgStatus::Ok);
        ssg_string_free(text);
        let mut same = -1;
        assert_eq!(ssg_graph_is_isomorphic(a, b, &mut same), SsgStatus::Ok);
        assert_eq!(same, 1);
        let c = family("sigma6small");
        assert_eq!(ssg_graph_is_isomorphic(a, c, &mut same), SsgStatus::Ok);
        assert_eq!(same, 0);

        let mut order = ptr::null_mut();
        assert_eq!(ssg_graph_aut_order(b, &mut order), SsgStatus::Ok);
        assert_eq!(CStr::from_ptr(order).to_str().unwrap(), "1296");
        ssg_string_free(order);

        let mut e = ptr::null_mut();
        assert_eq!(ssg_graph_expand(a, 3, &mut e), SsgStatus::Ok);
        let g9 = family("gamma9");
        assert_eq!(ssg_graph_is_isomorphic(e, g9, &mut same), SsgStatus::Ok);
        assert_eq!(same, 1);
        let mut v = 7;
        assert_eq!(ssg_graph_semisymmetry(e, SsgMode::Certificate, &mut v), SsgStatus::Ok);
        assert_eq!(v, SSG_UNDECIDED);
        for g in [a, b, c, e, g9] {
            ssg_graph_free(g);
        }
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut g = ptr::null_mut();
    unsafe {
        let t = CString::new("sigma1:4").unwrap();
        assert_eq!(ssg_family_build(t.as_ptr(), &mut g), SsgStatus::BadParameter);
        assert!(last_error().contains('4'));
        let t = CString::new("nonsense").unwrap();
        assert_eq!(ssg_family_build(t.as_ptr(), &mut g), SsgStatus::UnknownFamily);
        assert_eq!(ssg_family_build(ptr::null(), &mut g), SsgStatus::NullArgument);
        let t = CString::new("not a graph").unwrap();
        assert_eq!(ssg_graph_from_text(t.as_ptr(), &mut g), SsgStatus::Parse);
        let bad = [0xffu8, 0];
        assert_eq!(ssg_graph_from_text(bad.as_ptr().cast(), &mut g), SsgStatus::InvalidUtf8);
        assert!(g.is_null());

        let big = family("gamma1:7");
        let mut v = 0;
        assert_eq!(ssg_graph_semisymmetry(big, SsgMode::Full, &mut v), SsgStatus::BoundExceeded);
        assert_eq!(ssg_graph_semisymmetry(big, SsgMode::Certificate, &mut v), SsgStatus::Ok);
        assert_eq!(v, SSG_YES);
        assert_eq!(last_error(), "");
        assert_eq!(ssg_graph_expand(big, 0, &mut g), SsgStatus::BadParameter);
        ssg_graph_free(big);
        ssg_graph_free(ptr::null_mut());
        ssg_string_free(ptr::null_mut());
    }
}
