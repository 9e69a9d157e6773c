use std::ffi::CStr;
use std::process::Command;
use std::ptr;

use sievelab_ffi::*;

fn last_error() -> String {
    let p = sievelab_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn prime_table_round_trip() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(sievelab_prime_table_new(1_000_000, &mut t), SievelabStatus::Ok);
        let mut pi = 0;
        assert_eq!(sievelab_prime_table_pi(t, 1_000_000, &mut pi), SievelabStatus::Ok);
        assert_eq!(pi, 78_498);
        let mut is_p = false;
        assert_eq!(sievelab_prime_table_is_prime(t, 999_983, &mut is_p), SievelabStatus::Ok);
        assert!(is_p);
        let mut limit = 0;
        assert_eq!(sievelab_prime_table_limit(t, &mut limit), SievelabStatus::Ok);
        assert_eq!(limit, 1_000_000);

        let mut untouched = 7;
        assert_eq!(sievelab_prime_table_pi(t, 2_000_000, &mut untouched), SievelabStatus::TableTooSmall);
        assert_eq!(untouched, 7);
        assert!(last_error().contains("table too small"));
        sievelab_prime_table_free(t);
        sievelab_prime_table_free(ptr::null_mut());
    }
}

#[test]
fn counts_through_handles() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(sievelab_tables_new(1_000, 1, 0, &mut t), SievelabStatus::Ok);
        let mut c = 0;
        assert_eq!(sievelab_count_sk(t, 20, 1, 2, 1, 0, &mut c), SievelabStatus::Ok);
        assert_eq!(c, 3);
        assert_eq!(sievelab_count_n2(t, 100, 1, 2, 1, 100, &mut c), SievelabStatus::Ok);
        assert_eq!(c, 7);
        let mut s = 0;
        assert_eq!(sievelab_count_s2(t, 100, 1, 2, 1, 100, &mut s), SievelabStatus::Ok);
        assert!(s >= 7);
        assert_eq!(sievelab_count_sk(t, 20, 1, 2, 1, 5, &mut c), SievelabStatus::Domain);
        assert_eq!(sievelab_count_n2(t, 100, 1, 2, 1, 0, &mut c), SievelabStatus::Domain);
        assert_eq!(sievelab_count_sk(t, 20, 2, 2, 1, 0, &mut c), SievelabStatus::Domain);
        assert!(last_error().contains("odd"));
        sievelab_tables_free(t);
    }
}

#[test]
fn constants_and_bounds() {
    unsafe {
        let mut f = 0.0;
        assert_eq!(sievelab_f_ad(1.0 / 87.0, 85.0 / 688.0, 1e-12, &mut f), SievelabStatus::Ok);
        assert!((f - 0.000_105_596_829_571).abs() < 1e-14);
        let mut c = 0.0;
        assert_eq!(sievelab_c1(1.0 / 87.0, 85.0 / 688.0, &mut c), SievelabStatus::Ok);
        assert!((c - 0.5 * 3f64.ln()).abs() < 1e-14);
        assert_eq!(sievelab_c2(1.0 / 87.0, 85.0 / 688.0, &mut c), SievelabStatus::Ok);
        assert_eq!(sievelab_c_delta(85.0 / 688.0, 1e-12, &mut c), SievelabStatus::Ok);
        assert!((c - 0.369_586_003_399).abs() < 1e-11);
        assert_eq!(sievelab_c_delta(0.5, 1e-12, &mut c), SievelabStatus::Domain);
        assert_eq!(sievelab_richert_constant(8, 0.01, &mut c), SievelabStatus::Ok);
        assert_eq!(c, 52.0 / 3.0);

        let (mut n2, mut s2, mut err) = (0.0, 0.0, 0.0);
        let n2_kind = SievelabKind::N2 as i32;
        let s2_kind = SievelabKind::S2 as i32;
        assert_eq!(sievelab_bound(n2_kind, 0, 1_000_000, 3, 2, 0.01, 1_000, &mut n2, &mut err), SievelabStatus::Ok);
        assert_eq!(sievelab_bound(s2_kind, 0, 1_000_000, 3, 2, 0.01, 1_000, &mut s2, &mut err), SievelabStatus::Ok);
        assert_eq!(s2, 2.0 * n2);
        assert!(err > 0.0);
        assert_eq!(sievelab_bound(SievelabKind::SK as i32, 9, 1_000_000, 3, 2, 0.01, 1_000, &mut s2, &mut err), SievelabStatus::Domain);
        assert_eq!(sievelab_bound(42, 0, 1_000_000, 3, 2, 0.01, 1_000, &mut s2, &mut err), SievelabStatus::Domain);
        assert_eq!(sievelab_bound(n2_kind, 0, 1_000_000, 3, 2, 0.01, 1_000, ptr::null_mut(), &mut err), SievelabStatus::NullPointer);
    }
}

#[test]
fn null_handles_are_reported() {
    unsafe {
        let mut c = 0;
        assert_eq!(sievelab_count_sk(ptr::null(), 20, 1, 2, 1, 0, &mut c), SievelabStatus::NullPointer);
        assert_eq!(sievelab_prime_table_new(10, ptr::null_mut()), SievelabStatus::NullPointer);
        assert!(last_error().starts_with("null pointer"));
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(sievelab_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c_and_cxx() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/sievelab.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["sievelab_prime_table_new", "sievelab_count_sk", "sievelab_bound", "SIEVELAB_STATUS_PANIC", "SIEVELAB_KIND_SK"] {
        assert!(text.contains(name), "{name}");
    }
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(out) = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, header])
            .output()
        else {
            eprintln!("{compiler} not found; skipping the {lang} syntax check");
            continue;
        };
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
