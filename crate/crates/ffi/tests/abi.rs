use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use spindetect_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(spd_last_error()) }.to_string_lossy().into_owned()
}

fn preset(name: &str) -> *mut SpdConfig {
    let name = CString::new(name).unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { spd_config_from_preset(name.as_ptr(), &mut cfg) }, SpdStatus::SPD_OK);
    assert!(!cfg.is_null());
    cfg
}

#[test]
fn unknown_preset_is_a_config_error() {
    let name = CString::new("xx").unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { spd_config_from_preset(name.as_ptr(), &mut cfg) }, SpdStatus::SPD_CONFIG);
    assert!(cfg.is_null());
    assert!(last_error().contains("xx"));
}

#[test]
fn null_arguments_are_reported() {
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { spd_config_from_preset(ptr::null(), &mut cfg) }, SpdStatus::SPD_NULL_POINTER);
    assert_eq!(unsafe { spd_config_tau1(ptr::null(), ptr::null_mut()) }, SpdStatus::SPD_NULL_POINTER);
    unsafe {
        spd_config_free(ptr::null_mut());
        spd_record_free(ptr::null_mut());
        spd_ensemble_free(ptr::null_mut());
        spd_string_free(ptr::null_mut());
    }
}

#[test]
fn json_round_trip_through_the_abi() {
    let cfg = preset("bi");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { spd_config_to_json(cfg, &mut s) }, SpdStatus::SPD_OK);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { spd_config_from_json(s, &mut back) }, SpdStatus::SPD_OK);
    let mut s2 = ptr::null_mut();
    assert_eq!(unsafe { spd_config_to_json(back, &mut s2) }, SpdStatus::SPD_OK);
    unsafe {
        assert_eq!(CStr::from_ptr(s), CStr::from_ptr(s2));
        spd_string_free(s);
        spd_string_free(s2);
        spd_config_free(cfg);
        spd_config_free(back);
    }

    let bad = CString::new(r#"{"schema_version": 1, "extra": true}"#).unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { spd_config_from_json(bad.as_ptr(), &mut c) }, SpdStatus::SPD_CONFIG);
}

#[test]
fn design_report_and_tau1() {
    let cfg = preset("nv");
    let mut tau1 = 0.0;
    assert_eq!(unsafe { spd_config_tau1(cfg, &mut tau1) }, SpdStatus::SPD_OK);
    assert!((tau1 / 0.35e-3 - 1.0).abs() < 0.05);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { spd_design_report_json(cfg, &mut s) }, SpdStatus::SPD_OK);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    assert!(text.contains("delta_i_a"));
    unsafe {
        spd_string_free(s);
        spd_config_free(cfg);
    }
}

#[test]
fn records_are_reproducible_and_copyable() {
    let cfg = preset("sim");
    assert_eq!(unsafe { spd_config_set_duration_tau1(cfg, 2.0) }, SpdStatus::SPD_OK);
    assert_eq!(unsafe { spd_config_set_duration_tau1(cfg, -1.0) }, SpdStatus::SPD_CONFIG);
    assert_eq!(unsafe { spd_config_set_seed(cfg, 9) }, SpdStatus::SPD_OK);
    let run = || {
        let mut rec = ptr::null_mut();
        assert_eq!(unsafe { spd_record_simulate(cfg, true, &mut rec) }, SpdStatus::SPD_OK);
        let n = unsafe { spd_record_len(rec) };
        let mut buf = vec![0.0; n];
        assert_eq!(unsafe { spd_record_copy(rec, buf.as_mut_ptr(), n) }, SpdStatus::SPD_OK);
        if n > 0 {
            assert_eq!(unsafe { spd_record_copy(rec, buf.as_mut_ptr(), n - 1) }, SpdStatus::SPD_OUT_OF_RANGE);
        }
        let mut p = -1.0;
        assert_eq!(unsafe { spd_record_posterior(cfg, rec, &mut p) }, SpdStatus::SPD_OK);
        assert!((0.0..=1.0).contains(&p));
        assert!(unsafe { spd_record_dt(rec) } > 0.0);
        unsafe { spd_record_free(rec) };
        (buf, p)
    };
    let (a, pa) = run();
    let (b, pb) = run();
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert_eq!(pa, pb);
    unsafe { spd_config_free(cfg) };
}

#[test]
fn small_ensemble() {
    let cfg = preset("sim");
    unsafe {
        assert_eq!(spd_config_set_trials(cfg, 100), SpdStatus::SPD_OK);
        assert_eq!(spd_config_set_duration_tau1(cfg, 2.0), SpdStatus::SPD_OK);
    }
    let mut ens = ptr::null_mut();
    assert_eq!(unsafe { spd_ensemble_run(cfg, 0.5, &mut ens) }, SpdStatus::SPD_OK);
    assert_eq!(unsafe { spd_ensemble_trials_used(ens) }, 100);
    let n = unsafe { spd_ensemble_curve_len(ens) };
    assert!(n > 0);
    let mut pt = SpdCurvePoint::default();
    assert_eq!(unsafe { spd_ensemble_curve_point(ens, n - 1, &mut pt) }, SpdStatus::SPD_OK);
    assert!((0.0..=1.0).contains(&pt.error_bayes_empirical));
    assert_eq!(unsafe { spd_ensemble_curve_point(ens, n, &mut pt) }, SpdStatus::SPD_OUT_OF_RANGE);
    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { spd_ensemble_run(cfg, 1.5, &mut bad) }, SpdStatus::SPD_CONFIG);
    unsafe { spd_config_set_trials(cfg, 10) };
    assert_eq!(unsafe { spd_ensemble_run(cfg, 0.5, &mut bad) }, SpdStatus::SPD_CONFIG);
    unsafe {
        spd_ensemble_free(ens);
        spd_config_free(cfg);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(spd_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/spindetect.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["spd_config_from_preset", "spd_ensemble_run", "SPD_NUMERICAL = 3", "typedef struct SpdConfig SpdConfig"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"spindetect.h\"\nint main(void) { SpdConfig *c = 0; return spd_config_from_preset(\"sim\", &c) == SPD_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
        .expect("C compiler available");
    assert!(status.success());
}
