//! C ABI for `cdw-lab`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` or
//! `*_parse` functions and released with the matching `*_free`. Fallible
//! functions return a [`CdwStatus`] and write results through out
//! pointers; on failure [`cdw_last_error_message`] describes the problem.
//! Panics never unwind into the caller and are reported as
//! [`CdwStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cdw_lab::config::{build_config, parse_entries, Experiment, RunConfig};
use cdw_lab::evolver::{evolve_with, ComplexField, StepOptions, Trajectory};
use cdw_lab::run::{compute, current_params, run};
use cdw_lab::sine_gordon::{kink_phase, KinkSpec};
use cdw_lab::tunneling::{current_beckwith, current_zener_with, gaussian_norm_constant, soliton_fourier};
use cdw_lab::variational::{energy_expectation, phase_expectation, AnsatzCoeffs};
use cdw_lab::{model, CdwError, CurveTable};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdwStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Overflow = 3,
    Quadrature = 4,
    Convergence = 5,
    Diagnostic = 6,
    Config = 7,
    Io = 8,
    InvalidUtf8 = 9,
    OutOfRange = 10,
    Panic = 11,
}

impl From<&CdwError> for CdwStatus {
    fn from(e: &CdwError) -> Self {
        match e {
            CdwError::Domain(_) => CdwStatus::Domain,
            CdwError::Overflow { .. } => CdwStatus::Overflow,
            CdwError::Quadrature(_) => CdwStatus::Quadrature,
            CdwError::Convergence { .. } => CdwStatus::Convergence,
            CdwError::Diagnostic(_) => CdwStatus::Diagnostic,
            CdwError::Config { .. } => CdwStatus::Config,
            CdwError::Io(_) => CdwStatus::Io,
        }
    }
}

/// A run configuration: experiment, constants and numerical settings.
pub struct CdwConfig {
    inner: RunConfig,
}

/// A result table with named `double` columns.
pub struct CdwTable {
    inner: CurveTable,
    names: Vec<CString>,
}

/// Per-step record of a single-chain evolution.
pub struct CdwTrajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: CdwStatus, msg: impl Into<String>) -> CdwStatus {
    set_error(msg.into());
    status
}

fn from_error(e: CdwError) -> CdwStatus {
    let s = CdwStatus::from(&e);
    fail(s, format!("{}: {}", e.code(), e))
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), CdwStatus>) -> CdwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CdwStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(CdwStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, CdwStatus>;
}

impl<T> OrStatus<T> for cdw_lab::Result<T> {
    fn or_status(self) -> Result<T, CdwStatus> {
        self.map_err(from_error)
    }
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, CdwStatus> {
    p.as_ref().ok_or_else(|| fail(CdwStatus::NullPointer, "null handle"))
}

unsafe fn borrow_mut<'a, T>(p: *mut T) -> Result<&'a mut T, CdwStatus> {
    p.as_mut().ok_or_else(|| fail(CdwStatus::NullPointer, "null handle"))
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), CdwStatus> {
    if out.is_null() {
        return Err(fail(CdwStatus::NullPointer, "null output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, CdwStatus> {
    if s.is_null() {
        return Err(fail(CdwStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(CdwStatus::InvalidUtf8, "string is not UTF-8"))
}

/// Message for the last failure on this thread. The pointer stays valid
/// until the next failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn cdw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cdw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New configuration for the named experiment with default settings.
///
/// # Safety
/// `experiment` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cdw_config_new(experiment: *const c_char, out: *mut *mut CdwConfig) -> CdwStatus {
    guard(|| {
        let name = text(experiment)?;
        let exp = Experiment::from_name(name)
            .ok_or_else(|| fail(CdwStatus::Config, format!("unknown experiment {name:?}")))?;
        let h = Box::new(CdwConfig {
            inner: RunConfig::new(exp),
        });
        write(out, Box::into_raw(h))
    })
}

/// Parses `key = value` config text.
///
/// # Safety
/// `text_in` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cdw_config_parse(text_in: *const c_char, out: *mut *mut CdwConfig) -> CdwStatus {
    guard(|| {
        let t = text(text_in)?;
        let cfg = build_config(parse_entries(t).or_status()?).or_status()?;
        write(out, Box::into_raw(Box::new(CdwConfig { inner: cfg })))
    })
}

/// Sets one config entry using the config-file key names.
///
/// # Safety
/// `cfg` must come from this library; `key` and `value` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn cdw_config_set(cfg: *mut CdwConfig, key: *const c_char, value: *const c_char) -> CdwStatus {
    guard(|| {
        let c = borrow_mut(cfg)?;
        let (k, v) = (text(key)?, text(value)?);
        if k == "experiment" {
            c.inner.experiment =
                Experiment::from_name(v).ok_or_else(|| fail(CdwStatus::Config, format!("unknown experiment {v:?}")))?;
            return Ok(());
        }
        c.inner.set(k, v).map_err(|d| fail(CdwStatus::Config, d))?;
        c.inner.variational.minimizer.seed = c.inner.seed;
        Ok(())
    })
}

/// # Safety
/// `cfg` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn cdw_config_free(cfg: *mut CdwConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Runs the configured experiment and writes its CSV to the configured
/// output path.
///
/// # Safety
/// `cfg` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn cdw_run(cfg: *const CdwConfig) -> CdwStatus {
    guard(|| {
        run(&borrow(cfg)?.inner).or_status()?;
        Ok(())
    })
}

/// Runs the configured experiment and returns its table without writing.
///
/// # Safety
/// `cfg` must come from this library and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn cdw_compute(cfg: *const CdwConfig, out: *mut *mut CdwTable) -> CdwStatus {
    guard(|| {
        let (table, _) = compute(&borrow(cfg)?.inner).or_status()?;
        let names = table
            .columns()
            .iter()
            .map(|n| CString::new(n.as_str()).unwrap_or_default())
            .collect();
        write(out, Box::into_raw(Box::new(CdwTable { inner: table, names })))
    })
}

/// # Safety
/// `t` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn cdw_table_rows(t: *const CdwTable) -> usize {
    t.as_ref().map_or(0, |t| t.inner.rows().len())
}

/// # Safety
/// `t` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn cdw_table_columns(t: *const CdwTable) -> usize {
    t.as_ref().map_or(0, |t| t.names.len())
}

/// Column name owned by the table; null when out of range.
///
/// # Safety
/// `t` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn cdw_table_column_name(t: *const CdwTable, col: usize) -> *const c_char {
    t.as_ref()
        .and_then(|t| t.names.get(col))
        .map_or(ptr::null(), |n| n.as_ptr())
}

/// # Safety
/// `t` must come from this library and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn cdw_table_value(t: *const CdwTable, row: usize, col: usize, out: *mut f64) -> CdwStatus {
    guard(|| {
        let t = borrow(t)?;
        let v = t
            .inner
            .rows()
            .get(row)
            .and_then(|r| r.get(col))
            .ok_or_else(|| fail(CdwStatus::OutOfRange, format!("no cell ({row}, {col})")))?;
        write(out, *v)
    })
}

/// # Safety
/// `t` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn cdw_table_free(t: *mut CdwTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Evolves the configured Gaussian packet with the configured scheme.
///
/// # Safety
/// `cfg` must come from this library and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn cdw_evolve(cfg: *const CdwConfig, out: *mut *mut CdwTrajectory) -> CdwStatus {
    guard(|| {
        let cfg = &borrow(cfg)?.inner;
        let c = &cfg.chain;
        let init = ComplexField::gaussian_packet(c.points, c.x_min, c.x_max, c.x_c, c.alpha0).or_status()?;
        let opts = StepOptions {
            boundary: c.boundary,
            jacobi_sweeps: c.jacobi_sweeps,
        };
        let traj = evolve_with(c.scheme, &init, &cfg.params, &cfg.drive, c.dt, c.steps, opts).or_status()?;
        write(out, Box::into_raw(Box::new(CdwTrajectory { inner: traj })))
    })
}

/// Number of recorded levels, the initial one included.
///
/// # Safety
/// `t` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn cdw_trajectory_len(t: *const CdwTrajectory) -> usize {
    t.as_ref().map_or(0, |t| t.inner.len())
}

/// Step at which the amplitudes overflowed, or 0 when the run completed.
///
/// # Safety
/// `t` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn cdw_trajectory_truncated_at(t: *const CdwTrajectory) -> usize {
    t.as_ref().and_then(|t| t.inner.truncated_at).unwrap_or(0)
}

/// Time, mean phase and norm of level `i`.
///
/// # Safety
/// `t` must come from this library; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdw_trajectory_get(
    t: *const CdwTrajectory,
    i: usize,
    time: *mut f64,
    mean_phase: *mut f64,
    norm: *mut f64,
) -> CdwStatus {
    guard(|| {
        let t = &borrow(t)?.inner;
        if i >= t.len() {
            return Err(fail(CdwStatus::OutOfRange, format!("level {i} of {}", t.len())));
        }
        write(time, t.times[i])?;
        write(mean_phase, t.mean_phase[i])?;
        write(norm, t.norm[i])
    })
}

/// # Safety
/// `t` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn cdw_trajectory_free(t: *mut CdwTrajectory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Tilted washboard potential with the config's constants.
///
/// # Safety
/// `cfg` must come from this library and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn cdw_washboard_potential(phi: f64, cfg: *const CdwConfig, out: *mut f64) -> CdwStatus {
    guard(|| {
        let p = &borrow(cfg)?.inner.params;
        write(out, model::washboard_potential(phi, p).or_status()?)
    })
}

/// Multi-chain potential of `n` phases.
///
/// # Safety
/// `phis` must point to `n` doubles; `cfg` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn cdw_multichain_potential(
    phis: *const f64,
    n: usize,
    cfg: *const CdwConfig,
    out: *mut f64,
) -> CdwStatus {
    guard(|| {
        let p = &borrow(cfg)?.inner.params;
        if phis.is_null() {
            return Err(fail(CdwStatus::NullPointer, "null phase array"));
        }
        let s = std::slice::from_raw_parts(phis, n);
        write(out, model::multichain_potential(s, p).or_status()?)
    })
}

/// Sine-Gordon kink `4·arctan(exp(±(z + βτ)/√(1 − β²)))`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdw_kink_phase(z: f64, tau: f64, beta: f64, sign: i8, out: *mut f64) -> CdwStatus {
    guard(|| {
        let k = KinkSpec::new(beta, sign).or_status()?;
        write(out, kink_phase(z, tau, k).or_status()?)
    })
}

#[no_mangle]
pub extern "C" fn cdw_erf(x: f64) -> f64 {
    cdw_lab::special::erf(x)
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdw_gaussian_norm_constant(a_exp: f64, upper: f64, out: *mut f64) -> CdwStatus {
    guard(|| write(out, gaussian_norm_constant(a_exp, upper).or_status()?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdw_soliton_fourier(k: f64, l: f64, out: *mut f64) -> CdwStatus {
    guard(|| write(out, soliton_fourier(k, l).or_status()?))
}

/// Soliton-pair current at field `e` with the config's threshold settings.
///
/// # Safety
/// `cfg` must come from this library and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn cdw_current_beckwith(e: f64, cfg: *const CdwConfig, out: *mut f64) -> CdwStatus {
    guard(|| {
        let cp = current_params(&borrow(cfg)?.inner);
        write(out, current_beckwith(e, &cp).or_status()?)
    })
}

/// Zener current; `gated` nonzero applies the threshold gate.
///
/// # Safety
/// `cfg` must come from this library and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn cdw_current_zener(e: f64, cfg: *const CdwConfig, gated: bool, out: *mut f64) -> CdwStatus {
    guard(|| {
        let cp = current_params(&borrow(cfg)?.inner);
        write(out, current_zener_with(e, &cp, gated).or_status()?)
    })
}

/// Two-chain variational energy and mean phase for coefficient arrays of
/// length 5 (`m = -2..2`), using the config's constants and quadrature.
///
/// # Safety
/// `b` and `c` must point to 5 doubles; out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cdw_variational_energy(
    b: *const f64,
    c: *const f64,
    alpha: f64,
    theta: f64,
    cfg: *const CdwConfig,
    energy: *mut f64,
    mean_phi: *mut f64,
) -> CdwStatus {
    guard(|| {
        let cfg = &borrow(cfg)?.inner;
        if b.is_null() || c.is_null() {
            return Err(fail(CdwStatus::NullPointer, "null coefficient array"));
        }
        let mut bb = [0.0; 5];
        let mut cc = [0.0; 5];
        bb.copy_from_slice(std::slice::from_raw_parts(b, 5));
        cc.copy_from_slice(std::slice::from_raw_parts(c, 5));
        let a = AnsatzCoeffs::new(bb, cc, alpha).or_status()?;
        let q = &cfg.variational.quadrature;
        write(energy, energy_expectation(&a, &cfg.params, theta, q).or_status()?)?;
        write(mean_phi, phase_expectation(&a, q).or_status()?)
    })
}
