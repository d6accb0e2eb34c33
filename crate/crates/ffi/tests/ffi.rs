use std::ffi::{CStr, CString};
use std::ptr;

use braidcat_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = braidcat_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn group_rmatrix_core_round_trip() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(braidcat_group_load(c("Z2").as_ptr(), &mut g), BraidcatStatus::Ok);
        let mut n = 0usize;
        assert_eq!(braidcat_group_dim(g, &mut n), BraidcatStatus::Ok);
        assert_eq!(n, 2);

        let mut r = ptr::null_mut();
        assert_eq!(braidcat_rmatrix_load(g, c("sign").as_ptr(), &mut r), BraidcatStatus::Ok);
        let mut size = 0usize;
        assert_eq!(braidcat_rmatrix_size(r, &mut size), BraidcatStatus::Ok);
        assert_eq!(size, 4);
        let (mut re, mut im) = (vec![0.0; 16], vec![0.0; 16]);
        assert_eq!(braidcat_rmatrix_entries(r, re.as_mut_ptr(), im.as_mut_ptr(), 16), BraidcatStatus::Ok);
        // The sign R-matrix is a real symmetric involution other than I.
        assert!(im.iter().all(|x| x.abs() < 1e-12));
        for i in 0..4 {
            for j in 0..4 {
                let sq: f64 = (0..4).map(|k| re[i * 4 + k] * re[k * 4 + j]).sum();
                assert!((sq - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
                assert!((re[i * 4 + j] - re[j * 4 + i]).abs() < 1e-12);
            }
        }
        assert!((0..4).any(|i| (re[i * 4 + i] - 1.0).abs() > 1e-6));

        let mut core = ptr::null_mut();
        assert_eq!(braidcat_core_build(r, &mut core), BraidcatStatus::Ok);
        let mut dim = 0usize;
        assert_eq!(braidcat_core_dim(core, &mut dim), BraidcatStatus::Ok);
        assert_eq!(dim, 4);
        let mut braiding = 1.0;
        assert_eq!(braidcat_core_braiding_residual(core, &mut braiding), BraidcatStatus::Ok);
        assert!(braiding <= 1e-9);
        let mut back = 1.0;
        assert_eq!(braidcat_core_extraction_residual(core, &mut back), BraidcatStatus::Ok);
        assert!(back <= 1e-9);

        braidcat_core_free(core);
        braidcat_rmatrix_free(r);
        braidcat_group_free(g);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(braidcat_group_load(c("Z7").as_ptr(), &mut g), BraidcatStatus::InvalidInput);
        assert!(g.is_null());
        assert!(last_error().contains("Z7"));

        assert_eq!(braidcat_group_load(ptr::null(), &mut g), BraidcatStatus::NullPointer);
        let mut n = 0usize;
        assert_eq!(braidcat_group_dim(ptr::null(), &mut n), BraidcatStatus::NullPointer);

        assert_eq!(braidcat_group_load(c("Z3").as_ptr(), &mut g), BraidcatStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(braidcat_rmatrix_load(g, c("sign").as_ptr(), &mut r), BraidcatStatus::InvalidInput);
        assert_eq!(braidcat_rmatrix_load(g, c("bicharacter:2").as_ptr(), &mut r), BraidcatStatus::Ok);
        let (mut re, mut im) = (vec![0.0; 4], vec![0.0; 4]);
        assert_eq!(
            braidcat_rmatrix_entries(r, re.as_mut_ptr(), im.as_mut_ptr(), 4),
            BraidcatStatus::BufferTooSmall
        );
        braidcat_rmatrix_free(r);
        braidcat_group_free(g);

        braidcat_group_free(ptr::null_mut());
        braidcat_report_free(ptr::null_mut());
    }
}

#[test]
fn run_produces_a_json_report() {
    unsafe {
        let mut rep = ptr::null_mut();
        let status = braidcat_run(
            c("check-rmatrix").as_ptr(),
            c("Z2").as_ptr(),
            c("sign").as_ptr(),
            ptr::null(),
            0.0,
            &mut rep,
        );
        assert_eq!(status, BraidcatStatus::Ok);
        let mut pass = false;
        assert_eq!(braidcat_report_pass(rep, &mut pass), BraidcatStatus::Ok);
        assert!(pass);
        let mut count = 0usize;
        assert_eq!(braidcat_report_check_count(rep, &mut count), BraidcatStatus::Ok);
        assert!(count >= 2);

        let mut need = 0usize;
        assert_eq!(braidcat_report_json(rep, ptr::null_mut(), 0, &mut need), BraidcatStatus::BufferTooSmall);
        let mut buf = vec![0 as std::ffi::c_char; need];
        assert_eq!(braidcat_report_json(rep, buf.as_mut_ptr(), need, &mut need), BraidcatStatus::Ok);
        let json = CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
        assert!(json.contains("\"schema\": \"braidcat-report/1\""));
        assert!(json.contains("rmatrix[Z2/sign]"));
        braidcat_report_free(rep);

        let mut rep = ptr::null_mut();
        let status = braidcat_run(c("no-such").as_ptr(), ptr::null(), ptr::null(), ptr::null(), 0.0, &mut rep);
        assert_eq!(status, BraidcatStatus::InvalidInput);
        assert!(last_error().contains("no-such"));
        let status = braidcat_run(c("check-rmatrix").as_ptr(), c("Z2").as_ptr(), ptr::null(), ptr::null(), 0.5, &mut rep);
        assert_eq!(status, BraidcatStatus::InvalidInput);
    }
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(braidcat_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/braidcat.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct BraidcatCore BraidcatCore;"));
    assert!(header.contains("BRAIDCAT_STATUS_OK = 0"));
}

#[test]
fn header_compiles_as_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let dir = std::env::temp_dir().join(format!("braidcat-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        r#"#include "braidcat.h"
int main(void) {
    BraidcatGroup *g = NULL;
    BraidcatRMatrix *r = NULL;
    BraidcatCore *core = NULL;
    BraidcatReport *rep = NULL;
    size_t n = 0;
    double res = 0.0;
    bool pass = false;
    if (braidcat_group_load("Z2", &g) != BRAIDCAT_STATUS_OK) return 1;
    braidcat_group_dim(g, &n);
    braidcat_rmatrix_load(g, "sign", &r);
    braidcat_core_build(r, &core);
    braidcat_core_braiding_residual(core, &res);
    braidcat_run("check-rmatrix", "Z2", "sign", NULL, 0.0, &rep);
    braidcat_report_pass(rep, &pass);
    braidcat_report_json(rep, NULL, 0, &n);
    braidcat_report_free(rep);
    braidcat_core_free(core);
    braidcat_rmatrix_free(r);
    braidcat_group_free(g);
    return pass ? 0 : 2;
}
"#,
    )
    .unwrap();
    let out = match std::process::Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .output()
    {
        Ok(o) => o,
        Err(e) => {
            eprintln!("skipping: no C compiler ({cc}: {e})");
            return;
        }
    };
    let _ = std::fs::remove_dir_all(&dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
