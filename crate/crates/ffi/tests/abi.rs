use std::ffi::CStr;
use std::ptr;

use fluxspec_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(fs_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn constant_mode_round_trip() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(fs_mode_new(1.0, 0, FsFamily::Plain, 0, 0, &mut m), FsStatus::Ok);
        assert!(!m.is_null());
        let mut lam = f64::NAN;
        assert_eq!(fs_mode_eigenvalue(m, &mut lam), FsStatus::Ok);
        assert!(lam.abs() < 1e-12);
        let mut norm = 0.0;
        assert_eq!(fs_inner_product(m, m, 32, &mut norm), FsStatus::Ok);
        assert!((norm - 2.0 * std::f64::consts::PI).abs() < 1e-10);
        let mut class = FsNormClass::NonNormalizable;
        assert_eq!(fs_mode_class(m, &mut class), FsStatus::Ok);
        assert_eq!(class, FsNormClass::Regular);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(fs_mode_evaluate(m, 0.3, 1.0, &mut re, &mut im), FsStatus::Ok);
        assert!((re - 1.0).abs() < 1e-12 && im.abs() < 1e-12);

        let mut img = ptr::null_mut();
        assert_eq!(fs_mode_apply_supercharge(m, &mut img), FsStatus::Ok);
        let mut zero = false;
        assert_eq!(fs_mode_is_zero(img, &mut zero), FsStatus::Ok);
        assert!(zero);
        let (mut mm, mut f) = (9, 9);
        assert_eq!(fs_mode_labels(img, &mut mm, &mut f), FsStatus::Ok);
        assert_eq!((mm, f), (1, 1));
        fs_mode_free(img);
        fs_mode_free(m);
    }
}

#[test]
fn supercharge_preserves_eigenvalue() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(fs_monopole_harmonic(2, 0, 1, 2, &mut m), FsStatus::Ok);
        let mut img = ptr::null_mut();
        assert_eq!(fs_mode_apply_supercharge(m, &mut img), FsStatus::Ok);
        let (mut a, mut b) = (0.0, 1.0);
        fs_mode_eigenvalue(m, &mut a);
        fs_mode_eigenvalue(img, &mut b);
        assert!(a > 0.0 && (a - b).abs() < 1e-9 * a);
        fs_mode_free(img);
        fs_mode_free(m);
    }
}

#[test]
fn scalar_entry_points() {
    unsafe {
        let mut p = 0.0;
        assert_eq!(fs_jacobi_eval(2, 0.0, 0.0, 0.5, &mut p), FsStatus::Ok);
        assert!((p + 0.125).abs() < 1e-14);
        let mut idx = 0;
        assert_eq!(fs_witten_index(-2.0, &mut idx), FsStatus::Ok);
        assert_eq!(idx, -2);
        let mut flux = 0.0;
        assert_eq!(fs_flux_integral(0.7, 64, &mut flux), FsStatus::Ok);
        assert!((flux - 0.7).abs() < 1e-8);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut idx = 0;
        assert_eq!(fs_witten_index(0.5, &mut idx), FsStatus::NonIntegerFlux);
        assert!(last_error().contains("not an integer"));

        let mut m = ptr::null_mut();
        assert_eq!(fs_mode_new(1.0, 0, FsFamily::Plain, -3, 1, &mut m), FsStatus::Divergent);
        assert!(m.is_null());
        assert_eq!(fs_mode_new(1.0, 7, FsFamily::Plain, 0, 0, &mut m), FsStatus::InvalidArgument);

        assert_eq!(fs_mode_eigenvalue(ptr::null(), &mut 0.0), FsStatus::NullPointer);
        assert_eq!(fs_jacobi_eval(1, 0.0, 0.0, 0.0, ptr::null_mut()), FsStatus::NullPointer);
        assert_eq!(fs_jacobi_eval(1, 0.0, 0.0, 0.0, &mut 0.0), FsStatus::Ok);
        assert!(last_error().is_empty());
        fs_mode_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/fluxspec.h")).unwrap();
    for sym in ["fs_mode_new", "fs_mode_free", "fs_last_error_message", "FS_STATUS_OK", "typedef struct FsMode FsMode"] {
        assert!(h.contains(sym), "{sym}");
    }
}
