use std::f64::consts::PI;
use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use lpft_ffi::*;

fn handle(spec: &str) -> *mut LpftFunction {
    let s = CString::new(spec).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { lpft_function_new(s.as_ptr(), ptr::null(), &mut f) }, LpftStatus::Ok);
    f
}

fn last_error() -> String {
    let p = lpft_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn gaussian_transform_through_handle() {
    let g = handle("gauss");
    let (mut re, mut im, mut err) = (0.0, 0.0, 0.0);
    let s = unsafe { lpft_fourier_transform(g, 1.0, 1e-10, &mut re, &mut im, &mut err) };
    assert_eq!(s, LpftStatus::Ok);
    assert!((re - (-PI).exp()).abs() < 1e-9 && im.abs() < 1e-9);
    unsafe { lpft_function_free(g) };
}

#[test]
fn expression_handles() {
    let f = handle("piecewise(-0.5, 0.5; 0; 1; 0)");
    let mut v = 0.0;
    assert_eq!(unsafe { lpft_function_eval(f, 0.25, &mut v) }, LpftStatus::Ok);
    assert_eq!(v, 1.0);
    let (mut val, mut err) = (0.0, 0.0);
    assert_eq!(unsafe { lpft_convolve(f, f, 0.5, 1e-9, &mut val, &mut err) }, LpftStatus::Ok);
    assert!((val - 0.5).abs() < 1e-9);
    unsafe { lpft_function_free(f) };
}

#[test]
fn improper_integral_and_laplace_derivative() {
    let s = handle("sinc_tail");
    let (mut v, mut e) = (0.0, 0.0);
    let st = unsafe { lpft_integrate(s, f64::NEG_INFINITY, f64::INFINITY, 1e-6, &mut v, &mut e) };
    assert_eq!(st, LpftStatus::Ok);
    assert!((v - PI).abs() < 1e-5);
    let a = handle("abs");
    let mut d = 0.0;
    let st = unsafe { lpft_laplace_derivative(a, 1, 0.0, 0.5, 1e-6, &mut d) };
    assert_eq!(st, LpftStatus::SidesDisagree);
    assert!(last_error().contains("disagree"));
    let st = unsafe { lpft_laplace_derivative(a, 1, 0.3, 0.5, 1e-6, &mut d) };
    assert_eq!(st, LpftStatus::Ok);
    assert!((d - 1.0).abs() < 1e-5);
    unsafe {
        lpft_function_free(s);
        lpft_function_free(a);
    }
}

#[test]
fn inversion_of_gauss() {
    let g = handle("gauss");
    let mut v = 0.0;
    assert_eq!(unsafe { lpft_invert(g, 0.0, 1e-6, &mut v) }, LpftStatus::Ok);
    assert!((v - 1.0).abs() < 1e-5);
    unsafe { lpft_function_free(g) };
}

#[test]
fn error_codes() {
    let name = CString::new("nosuch").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { lpft_function_new(name.as_ptr(), ptr::null(), &mut f) }, LpftStatus::UnknownFunction);
    assert!(f.is_null());
    let bad = CString::new("sin(").unwrap();
    assert_eq!(unsafe { lpft_function_new(bad.as_ptr(), ptr::null(), &mut f) }, LpftStatus::ParseError);
    assert_eq!(unsafe { lpft_function_new(ptr::null(), ptr::null(), &mut f) }, LpftStatus::NullPointer);
    let mut v = 0.0;
    assert_eq!(unsafe { lpft_function_eval(ptr::null(), 0.0, &mut v) }, LpftStatus::NullPointer);
    let s = handle("sinc_tail");
    let (mut re, mut im, mut e) = (0.0, 0.0, 0.0);
    let st = unsafe { lpft_fourier_transform(s, 0.5, 1e-6, &mut re, &mut im, &mut e) };
    assert_eq!(st, LpftStatus::HypothesisViolation);
    let name = unsafe { CStr::from_ptr(lpft_status_name(st)) };
    assert_eq!(name.to_str().unwrap(), "hypothesis-violation");
    unsafe { lpft_function_free(s) };
    unsafe { lpft_function_free(ptr::null_mut()) };
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/lpft.h")).unwrap();
    for name in [
        "lpft_function_new",
        "lpft_function_free",
        "lpft_function_eval",
        "lpft_integrate",
        "lpft_fourier_transform",
        "lpft_laplace_derivative",
        "lpft_convolve",
        "lpft_invert",
        "lpft_last_error",
        "lpft_status_name",
        "LPFT_STATUS_HYPOTHESIS_VIOLATION",
        "typedef struct LpftFunction LpftFunction",
    ] {
        assert!(h.contains(name), "{name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("liblpft_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("lpft_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("run cc");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{:?}", run);
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(text.starts_with("unknown-function 0.04321391826"), "{text}");
}
