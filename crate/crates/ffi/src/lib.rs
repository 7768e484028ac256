//! C ABI over `spindetect`.
//!
//! Objects are opaque heap handles created by `spd_*_new`/`spd_*_run`
//! functions and released with the matching `spd_*_free`. Every fallible
//! call returns an [`SpdStatus`]; the message of the last failure on the
//! calling thread is available from [`spd_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spindetect::cli::{design_report, ensemble_spec};
use spindetect::config::{Preset, RunConfig};
use spindetect::detection::{bayes_filter, run_ensemble, EnsembleStats};
use spindetect::dynamics::{generate_record, HomodyneRecord, TrajectoryOptions};
use spindetect::numerics::RngStream;
use spindetect::Error;

/// Result codes. The numeric values of `SPD_CONFIG` and `SPD_NUMERICAL`
/// match the command-line exit codes.
#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpdStatus {
    SPD_OK = 0,
    SPD_NULL_POINTER = 1,
    SPD_CONFIG = 2,
    SPD_NUMERICAL = 3,
    SPD_INVALID_UTF8 = 4,
    SPD_OUT_OF_RANGE = 5,
    SPD_PANIC = 6,
}

/// Run configuration handle.
pub struct SpdConfig(RunConfig);

/// Homodyne record handle.
pub struct SpdRecord(HomodyneRecord);

/// Ensemble result handle.
pub struct SpdEnsemble(EnsembleStats);

/// One point of the error-vs-time curves.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct SpdCurvePoint {
    pub t_s: f64,
    pub error_threshold_analytic: f64,
    pub error_threshold_empirical: f64,
    pub error_bayes_empirical: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SpdStatus {
    match e.exit_code() {
        2 => SpdStatus::SPD_CONFIG,
        _ => SpdStatus::SPD_NUMERICAL,
    }
}

enum Fail {
    Null(&'static str),
    Utf8(&'static str),
    Range(String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SpdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpdStatus::SPD_OK,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            SpdStatus::SPD_NULL_POINTER
        }
        Ok(Err(Fail::Utf8(what))) => {
            set_error(format!("{what} is not valid UTF-8"));
            SpdStatus::SPD_INVALID_UTF8
        }
        Ok(Err(Fail::Range(msg))) => {
            set_error(msg);
            SpdStatus::SPD_OUT_OF_RANGE
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            SpdStatus::SPD_PANIC
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Utf8(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn spd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn spd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn spd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Configuration from a preset name: "nv", "bi" or "sim".
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn spd_config_from_preset(name: *const c_char, out: *mut *mut SpdConfig) -> SpdStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let preset: Preset = str_arg(name, "name")?.parse()?;
        *out = Box::into_raw(Box::new(SpdConfig(RunConfig::preset(preset))));
        Ok(())
    })
}

/// Configuration from a JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn spd_config_from_json(json: *const c_char, out: *mut *mut SpdConfig) -> SpdStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let cfg = RunConfig::from_json(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(SpdConfig(cfg)));
        Ok(())
    })
}

/// Serialize a configuration; free the result with `spd_string_free`.
///
/// # Safety
/// `cfg` must be a live handle; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn spd_config_to_json(cfg: *const SpdConfig, out: *mut *mut c_char) -> SpdStatus {
    guard(|| {
        let cfg = handle(cfg, "cfg")?;
        let out = out_ptr(out, "out")?;
        *out = into_c_string(cfg.0.to_json());
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn spd_config_set_seed(cfg: *mut SpdConfig, seed: u64) -> SpdStatus {
    guard(|| {
        out_ptr(cfg, "cfg")?.0.seed = seed;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn spd_config_set_trials(cfg: *mut SpdConfig, trials: usize) -> SpdStatus {
    guard(|| {
        out_ptr(cfg, "cfg")?.0.trials = trials;
        Ok(())
    })
}

/// Set the duration in units of τ₁.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn spd_config_set_duration_tau1(cfg: *mut SpdConfig, tau1_units: f64) -> SpdStatus {
    guard(|| {
        let cfg = out_ptr(cfg, "cfg")?;
        let mut next = cfg.0.clone();
        next.duration = spindetect::config::Duration::Tau1(tau1_units);
        next.validate()?;
        cfg.0 = next;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn spd_config_free(cfg: *mut SpdConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// τ₁ of the configured model, s.
///
/// # Safety
/// `cfg` must be a live handle; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn spd_config_tau1(cfg: *const SpdConfig, out: *mut f64) -> SpdStatus {
    guard(|| {
        *out_ptr(out, "out")? = handle(cfg, "cfg")?.0.model_params().tau1();
        Ok(())
    })
}

/// Design report as JSON; free the result with `spd_string_free`.
///
/// # Safety
/// `cfg` must be a live handle; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn spd_design_report_json(cfg: *const SpdConfig, out: *mut *mut c_char) -> SpdStatus {
    guard(|| {
        let cfg = handle(cfg, "cfg")?;
        let out = out_ptr(out, "out")?;
        let report = design_report(&cfg.0)?;
        let s = serde_json::to_string_pretty(&report).map_err(Error::from)?;
        *out = into_c_string(s);
        Ok(())
    })
}

/// Simulate one record of the configured duration at the first efficiency
/// of the list. Spin-present records use RNG stream 0, spin-absent 1.
///
/// # Safety
/// `cfg` must be a live handle; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn spd_record_simulate(
    cfg: *const SpdConfig,
    spin_present: bool,
    out: *mut *mut SpdRecord,
) -> SpdStatus {
    guard(|| {
        let cfg = &handle(cfg, "cfg")?.0;
        let out = out_ptr(out, "out")?;
        let p = cfg.model_at_eta(cfg.eta_list[0]);
        let mut rng = RngStream::with_stream(cfg.seed, if spin_present { 0 } else { 1 });
        let (rec, _) =
            generate_record(&p, cfg.duration.seconds(p.tau1()), cfg.dt(&p), &mut rng, spin_present, &TrajectoryOptions::default())?;
        *out = Box::into_raw(Box::new(SpdRecord(rec)));
        Ok(())
    })
}

/// # Safety
/// `rec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn spd_record_len(rec: *const SpdRecord) -> usize {
    rec.as_ref().map_or(0, |r| r.0.dy.len())
}

/// # Safety
/// `rec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn spd_record_dt(rec: *const SpdRecord) -> f64 {
    rec.as_ref().map_or(f64::NAN, |r| r.0.dt_s)
}

/// Copy the increments dY into `buf`, which holds `len` doubles.
///
/// # Safety
/// `rec` must be a live handle; `buf` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn spd_record_copy(rec: *const SpdRecord, buf: *mut f64, len: usize) -> SpdStatus {
    guard(|| {
        let rec = handle(rec, "rec")?;
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        let n = rec.0.dy.len();
        if len < n {
            return Err(Fail::Range(format!("buffer holds {len} values, record has {n}")));
        }
        ptr::copy_nonoverlapping(rec.0.dy.as_ptr(), buf, n);
        Ok(())
    })
}

/// Posterior probability of "spin" at the end of the record.
///
/// # Safety
/// `cfg` and `rec` must be live handles; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn spd_record_posterior(cfg: *const SpdConfig, rec: *const SpdRecord, out: *mut f64) -> SpdStatus {
    guard(|| {
        let cfg = &handle(cfg, "cfg")?.0;
        let rec = &handle(rec, "rec")?.0;
        let out = out_ptr(out, "out")?;
        let every = rec.dy.len().max(1);
        let trace = bayes_filter(rec, &rec.params, cfg.prior_spin, every)?;
        *out = *trace.p_spin.last().expect("prior sample");
        Ok(())
    })
}

/// # Safety
/// `rec` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn spd_record_free(rec: *mut SpdRecord) {
    if !rec.is_null() {
        drop(Box::from_raw(rec));
    }
}

/// Run an ensemble at efficiency `eta`.
///
/// # Safety
/// `cfg` must be a live handle; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn spd_ensemble_run(cfg: *const SpdConfig, eta: f64, out: *mut *mut SpdEnsemble) -> SpdStatus {
    guard(|| {
        let cfg = &handle(cfg, "cfg")?.0;
        let out = out_ptr(out, "out")?;
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::config("eta", "must lie in (0, 1]").into());
        }
        let stats = run_ensemble(&ensemble_spec(cfg, eta))?;
        *out = Box::into_raw(Box::new(SpdEnsemble(stats)));
        Ok(())
    })
}

/// Number of trials that completed.
///
/// # Safety
/// `ens` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn spd_ensemble_trials_used(ens: *const SpdEnsemble) -> usize {
    ens.as_ref().map_or(0, |e| e.0.trials_used)
}

/// # Safety
/// `ens` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn spd_ensemble_curve_len(ens: *const SpdEnsemble) -> usize {
    ens.as_ref().map_or(0, |e| e.0.curve.len())
}

/// # Safety
/// `ens` must be a live handle; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn spd_ensemble_curve_point(
    ens: *const SpdEnsemble,
    index: usize,
    out: *mut SpdCurvePoint,
) -> SpdStatus {
    guard(|| {
        let ens = &handle(ens, "ens")?.0;
        let out = out_ptr(out, "out")?;
        let c = ens
            .curve
            .get(index)
            .ok_or_else(|| Fail::Range(format!("index {index} out of {} curve points", ens.curve.len())))?;
        *out = SpdCurvePoint {
            t_s: c.t_s,
            error_threshold_analytic: c.error_threshold_analytic,
            error_threshold_empirical: c.error_threshold_empirical,
            error_bayes_empirical: c.error_bayes_empirical,
        };
        Ok(())
    })
}

/// # Safety
/// `ens` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn spd_ensemble_free(ens: *mut SpdEnsemble) {
    if !ens.is_null() {
        drop(Box::from_raw(ens));
    }
}
