use std::ffi::{CStr, CString};
use std::ptr;

use cdw_lab_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cdw_last_error_message()) }.to_string_lossy().into_owned()
}

fn config(experiment: &str) -> *mut CdwConfig {
    let name = CString::new(experiment).unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { cdw_config_new(name.as_ptr(), &mut cfg) }, CdwStatus::Ok);
    assert!(!cfg.is_null());
    cfg
}

fn set(cfg: *mut CdwConfig, key: &str, value: &str) -> CdwStatus {
    let (k, v) = (CString::new(key).unwrap(), CString::new(value).unwrap());
    unsafe { cdw_config_set(cfg, k.as_ptr(), v.as_ptr()) }
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(cdw_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn unknown_experiment_is_config_error() {
    let name = CString::new("nope").unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { cdw_config_new(name.as_ptr(), &mut cfg) }, CdwStatus::Config);
    assert!(cfg.is_null());
    assert!(last_error().contains("nope"), "{}", last_error());
}

#[test]
fn null_arguments() {
    let mut out = 0.0;
    assert_eq!(unsafe { cdw_config_new(ptr::null(), &mut ptr::null_mut()) }, CdwStatus::NullPointer);
    assert_eq!(unsafe { cdw_run(ptr::null()) }, CdwStatus::NullPointer);
    assert_eq!(unsafe { cdw_current_beckwith(1.0, ptr::null(), &mut out) }, CdwStatus::NullPointer);
    assert_eq!(unsafe { cdw_gaussian_norm_constant(1.0, 1.0, ptr::null_mut()) }, CdwStatus::NullPointer);
    assert_eq!(unsafe { cdw_table_rows(ptr::null()) }, 0);
    assert!(unsafe { cdw_table_column_name(ptr::null(), 0) }.is_null());
    unsafe {
        cdw_config_free(ptr::null_mut());
        cdw_table_free(ptr::null_mut());
        cdw_trajectory_free(ptr::null_mut());
    }
}

#[test]
fn parse_and_set() {
    let text = CString::new("experiment = iv-curve\ncurrent.points = 4\n").unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { cdw_config_parse(text.as_ptr(), &mut cfg) }, CdwStatus::Ok);
    assert_eq!(set(cfg, "current.points", "6"), CdwStatus::Ok);
    assert_eq!(set(cfg, "current.points", "many"), CdwStatus::Config);
    assert_eq!(set(cfg, "no.such.key", "1"), CdwStatus::Config);

    let mut table = ptr::null_mut();
    assert_eq!(unsafe { cdw_compute(cfg, &mut table) }, CdwStatus::Ok);
    assert_eq!(unsafe { cdw_table_rows(table) }, 6);
    let ncol = unsafe { cdw_table_columns(table) };
    let first = unsafe { CStr::from_ptr(cdw_table_column_name(table, 0)) };
    assert_eq!(first.to_str().unwrap(), "E");
    assert!(unsafe { cdw_table_column_name(table, ncol) }.is_null());

    let mut v = f64::NAN;
    assert_eq!(unsafe { cdw_table_value(table, 5, 0, &mut v) }, CdwStatus::Ok);
    assert!(v > 0.0);
    assert_eq!(unsafe { cdw_table_value(table, 6, 0, &mut v) }, CdwStatus::OutOfRange);
    unsafe {
        cdw_table_free(table);
        cdw_config_free(cfg);
    }
}

#[test]
fn domain_error_sets_message() {
    let cfg = config("iv-curve");
    assert_eq!(set(cfg, "D", "-1"), CdwStatus::Ok);
    let mut table = ptr::null_mut();
    assert_eq!(unsafe { cdw_compute(cfg, &mut table) }, CdwStatus::Domain);
    assert!(table.is_null());
    assert!(!last_error().is_empty());
    unsafe { cdw_config_free(cfg) };
}

#[test]
fn run_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let cfg = config("fourier-check");
    assert_eq!(set(cfg, "output", path.to_str().unwrap()), CdwStatus::Ok);
    assert_eq!(unsafe { cdw_run(cfg) }, CdwStatus::Ok);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("k,numeric,exact,rel_dev\n"));
    unsafe { cdw_config_free(cfg) };
}

#[test]
fn evolve_trajectory() {
    let cfg = config("single-chain");
    assert_eq!(set(cfg, "chain.steps", "20"), CdwStatus::Ok);
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { cdw_evolve(cfg, &mut t) }, CdwStatus::Ok);
    assert_eq!(unsafe { cdw_trajectory_len(t) }, 21);
    assert_eq!(unsafe { cdw_trajectory_truncated_at(t) }, 0);
    let (mut time, mut phase, mut norm) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { cdw_trajectory_get(t, 20, &mut time, &mut phase, &mut norm) }, CdwStatus::Ok);
    assert!((time - 0.2).abs() < 1e-12);
    assert!((norm - 1.0).abs() < 1e-9, "{norm}");
    assert_eq!(
        unsafe { cdw_trajectory_get(t, 21, &mut time, &mut phase, &mut norm) },
        CdwStatus::OutOfRange
    );
    unsafe {
        cdw_trajectory_free(t);
        cdw_config_free(cfg);
    }
}

#[test]
fn scalar_functions() {
    let cfg = config("iv-curve");
    let mut out = 0.0;
    assert_eq!(unsafe { cdw_current_beckwith(0.5f64.sqrt(), cfg, &mut out) }, CdwStatus::Ok);
    assert!((out - (-(2f64.sqrt())).exp()).abs() < 1e-12);
    assert_eq!(unsafe { cdw_current_zener(0.5, cfg, false, &mut out) }, CdwStatus::Ok);
    assert!(out < 0.0);
    assert_eq!(unsafe { cdw_current_zener(0.5, cfg, true, &mut out) }, CdwStatus::Ok);
    assert_eq!(out, 0.0);
    assert_eq!(unsafe { cdw_current_beckwith(-1.0, cfg, &mut out) }, CdwStatus::Domain);

    assert_eq!(unsafe { cdw_washboard_potential(0.0, cfg, &mut out) }, CdwStatus::Ok);
    assert_eq!(out, 0.0);
    let phis = [0.0, 0.0, 0.0];
    assert_eq!(unsafe { cdw_multichain_potential(phis.as_ptr(), 3, cfg, &mut out) }, CdwStatus::Ok);
    assert_eq!(out, 0.0);

    assert_eq!(unsafe { cdw_kink_phase(0.0, 0.0, 0.0, 1, &mut out) }, CdwStatus::Ok);
    assert!((out - std::f64::consts::PI).abs() < 1e-15);
    assert_eq!(unsafe { cdw_kink_phase(0.0, 0.0, 1.0, 1, &mut out) }, CdwStatus::Domain);
    assert!((cdw_erf(1.0) - 0.842_700_792_949_714_9).abs() < 1e-15);
    assert_eq!(unsafe { cdw_soliton_fourier(0.0, 1.0, &mut out) }, CdwStatus::Ok);
    assert!(out.is_finite());
    unsafe { cdw_config_free(cfg) };
}

#[test]
fn variational_energy_matches_kinetic_anchor() {
    let cfg = config("variational-sweep");
    for (k, v) in [("D1", "174.091"), ("E1", "0"), ("E2", "0"), ("delta_prime", "0"), ("hbar", "1"), ("variational.panels", "160")] {
        assert_eq!(set(cfg, k, v), CdwStatus::Ok);
    }
    let b = [0.0, 0.0, 1.0, 0.0, 0.0];
    let (mut e, mut phi) = (0.0, 1.0);
    assert_eq!(
        unsafe { cdw_variational_energy(b.as_ptr(), b.as_ptr(), 1.0, 0.0, cfg, &mut e, &mut phi) },
        CdwStatus::Ok
    );
    assert!((e - 1.0 / 174.091).abs() < 1e-8 / 174.091, "{e}");
    assert!(phi.abs() < 1e-12);
    assert_eq!(
        unsafe { cdw_variational_energy(ptr::null(), b.as_ptr(), 1.0, 0.0, cfg, &mut e, &mut phi) },
        CdwStatus::NullPointer
    );
    unsafe { cdw_config_free(cfg) };
}

#[test]
fn header_declares_exports() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cdw_lab.h")).unwrap();
    for sym in ["cdw_config_new", "cdw_compute", "cdw_table_value", "cdw_evolve", "cdw_last_error_message", "CDW_STATUS_OK"] {
        assert!(h.contains(sym), "{sym} missing from header");
    }
}
