use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use idep_ffi::*;

fn last_error() -> String {
    let p = idep_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn hydrogen() -> *mut IdepPotential {
    let name = CString::new("h2").unwrap();
    let mut p = ptr::null_mut();
    let st = unsafe { idep_potential_from_registry(name.as_ptr(), 0.5, 0, &mut p) };
    assert_eq!(st, IdepStatus::Ok);
    p
}

#[test]
fn potential_round_trip() {
    let p = hydrogen();
    let mut v = f64::NAN;
    assert_eq!(unsafe { idep_potential_evaluate(p, 0.7416, &mut v) }, IdepStatus::Ok);
    assert!(v.abs() < 1e-12);
    assert!(idep_last_error_message().is_null());
    unsafe { idep_potential_free(p) };

    let mut p = ptr::null_mut();
    // LiH by hand.
    let st = unsafe { idep_potential_new(2.5155, 1.5955, 0.8801, 1.595500403, -0.3326882575, 0.5, 0, &mut p) };
    assert_eq!(st, IdepStatus::Ok);
    assert_eq!(unsafe { idep_potential_evaluate(p, 2.0, &mut v) }, IdepStatus::Ok);
    assert!((v - 1.86447190324e-1).abs() < 1e-11);
    unsafe { idep_potential_free(p) };
}

#[test]
fn eigenvalues_match_grid() {
    let p = hydrogen();
    let mut grid = [0.0; 4];
    assert_eq!(unsafe { idep_grid_spectrum(p, ptr::null(), 4, grid.as_mut_ptr()) }, IdepStatus::Ok);
    let units = idep_units_default();
    for (n, g) in grid.iter().enumerate() {
        let mut cp = 0.0;
        let st = unsafe { idep_momentum_eigenvalue(p, units, n, IdepEigenvalueVariant::QuantizationRoot as i32, &mut cp) };
        assert_eq!(st, IdepStatus::Ok);
        assert!(((cp - g) / g).abs() < 0.01, "n = {n}: {cp} vs {g}");
        let mut lit = 0.0;
        let st = unsafe { idep_momentum_eigenvalue(p, units, n, IdepEigenvalueVariant::BetaTimesA as i32, &mut lit) };
        assert_eq!(st, IdepStatus::Ok);
        assert!(lit < 0.0);
    }
    unsafe {
        idep_units_free(units);
        idep_potential_free(p);
    }
}

#[test]
fn error_codes() {
    let mut p = ptr::null_mut();
    let name = CString::new("Xe2").unwrap();
    assert_eq!(unsafe { idep_potential_from_registry(name.as_ptr(), 0.5, 0, &mut p) }, IdepStatus::UnknownMolecule);
    assert!(last_error().contains("Xe2"));
    assert!(p.is_null());
    assert_eq!(unsafe { idep_potential_from_registry(ptr::null(), 0.5, 0, &mut p) }, IdepStatus::NullPointer);
    let name = CString::new("H2").unwrap();
    assert_eq!(unsafe { idep_potential_from_registry(name.as_ptr(), 0.5, 7, &mut p) }, IdepStatus::InvalidArgument);
    assert_eq!(unsafe { idep_potential_from_registry(name.as_ptr(), -1.0, 0, &mut p) }, IdepStatus::InvalidArgument);

    let mut u = ptr::null_mut();
    assert_eq!(unsafe { idep_units_new(-1.0, 1.0, &mut u) }, IdepStatus::InvalidArgument);
    assert_eq!(unsafe { idep_units_new(1.0, 1.0, &mut u) }, IdepStatus::Ok);

    // q = 1 puts the pole at t0.
    let mut syn = ptr::null_mut();
    let st = unsafe { idep_potential_new(100.0, 1.3068528194400546, 1.0, 2.0, 1.0, 1.0, 0, &mut syn) };
    assert_eq!(st, IdepStatus::Ok);
    let mut v = 0.0;
    assert_eq!(unsafe { idep_potential_evaluate(syn, 2.0, &mut v) }, IdepStatus::Numerical);
    assert_eq!(unsafe { idep_momentum_eigenvalue(syn, u, 6, 0, &mut v) }, IdepStatus::Excluded);
    assert!(last_error().contains("excluded"));
    assert_eq!(unsafe { idep_momentum_eigenvalue(syn, u, 0, 0, &mut v) }, IdepStatus::Ok);
    assert!(idep_last_error_message().is_null());
    assert_eq!(unsafe { idep_momentum_eigenvalue(syn, u, 0, 9, &mut v) }, IdepStatus::InvalidArgument);
    assert_eq!(unsafe { idep_momentum_eigenvalue(syn, u, 0, 0, ptr::null_mut()) }, IdepStatus::NullPointer);
    assert_eq!(unsafe { idep_grid_spectrum(syn, u, 0, &mut v) }, IdepStatus::InvalidArgument);
    unsafe {
        idep_potential_free(syn);
        idep_units_free(u);
        idep_potential_free(ptr::null_mut());
    }
}

#[test]
fn jacobi_values() {
    let mut v = 0.0;
    assert_eq!(unsafe { idep_jacobi(3, 2.0, 1.0, 0.3, &mut v) }, IdepStatus::Ok);
    assert!((v + 0.9515).abs() < 1e-12);
    assert_eq!(unsafe { idep_jacobi(2, -1.0, 0.0, 0.3, &mut v) }, IdepStatus::InvalidArgument);
    let ver = unsafe { CStr::from_ptr(idep_version()) };
    assert_eq!(ver.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <math.h>
#include "idep.h"

int main(void) {
    IdepPotential *p = NULL;
    if (idep_potential_from_registry("CO", 0.5, IDEP_BETA_VARIANT_DIMENSION_CORRECTED, &p) != IDEP_STATUS_OK) return 10;
    double cp = 0.0;
    if (idep_momentum_eigenvalue(p, NULL, 0, IDEP_EIGENVALUE_VARIANT_QUANTIZATION_ROOT, &cp) != IDEP_STATUS_OK) return 11;
    double grid[2];
    if (idep_grid_spectrum(p, NULL, 2, grid) != IDEP_STATUS_OK) return 12;
    if (fabs(cp - grid[0]) > 0.01 * fabs(grid[0])) return 13;
    IdepPotential *bad = NULL;
    if (idep_potential_from_registry("nope", 0.5, 0, &bad) != IDEP_STATUS_UNKNOWN_MOLECULE) return 14;
    if (idep_last_error_message() == NULL) return 15;
    idep_potential_free(p);
    printf("%.6e\n", cp);
    return 0;
}
"#;

/// Compiles a C client against the generated header and static library.
#[test]
fn c_client_links() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("idep.h").exists());
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libidep_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library at {} or no C compiler", lib.display());
        return;
    }
    let dir = std::env::temp_dir().join(format!("idep-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("client.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let exe = dir.join("client");
    let cc = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&header_dir)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(cc.status.success(), "{}", String::from_utf8_lossy(&cc.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let cp: f64 = String::from_utf8_lossy(&run.stdout).trim().parse().unwrap();
    assert!(cp > 0.0);
    std::fs::remove_dir_all(&dir).unwrap();
}
