//! C ABI for the V2X coverage library.
//!
//! Scenarios are opaque handles configured through the same key-value schema
//! as the config files (`threshold_db`, `frequency_profile`, ...). Every
//! fallible call returns a [`V2xStatus`]; the message for the most recent
//! failure on the calling thread is available via
//! [`v2x_last_error_message`].
//!
//! The header `include/v2x_coverage.h` is generated by cbindgen at build
//! time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;

use v2x_coverage::analytic::coverage;
use v2x_coverage::harness::ConfigBuilder;
use v2x_coverage::montecarlo::estimate_coverage;
use v2x_coverage::{QuadratureSpec, RoadCase, VehicleModel};

/// Result code of a C API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum V2xStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A key, value, or scenario constraint was rejected.
    InvalidParameter = 3,
    /// Quadrature, series, or simulation failure.
    NumericFailure = 4,
}

/// Vehicle placement model along each road.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum V2xVehicleModel {
    Ppp = 0,
    Pcp = 1,
}

impl From<V2xVehicleModel> for VehicleModel {
    fn from(m: V2xVehicleModel) -> Self {
        match m {
            V2xVehicleModel::Ppp => VehicleModel::Ppp,
            V2xVehicleModel::Pcp => VehicleModel::Pcp,
        }
    }
}

/// Which road populations contribute interference.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum V2xRoadCase {
    Both = 0,
    OnlyLos = 1,
    OnlyNlos = 2,
}

impl From<V2xRoadCase> for RoadCase {
    fn from(c: V2xRoadCase) -> Self {
        match c {
            V2xRoadCase::Both => RoadCase::Both,
            V2xRoadCase::OnlyLos => RoadCase::OnlyLos,
            V2xRoadCase::OnlyNlos => RoadCase::OnlyNlos,
        }
    }
}

/// Opaque scenario handle.
pub struct V2xScenario {
    builder: ConfigBuilder,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: V2xStatus, message: &str) -> V2xStatus {
    set_last_error(message);
    status
}

/// Copies the most recent error message of this thread into `buf` (always
/// NUL-terminated when `cap > 0`) and returns the full length including the
/// terminator. A return value larger than `cap` means the message was
/// truncated.
///
/// # Safety
/// `buf` must point to at least `cap` writable bytes, or be null with
/// `cap == 0` to query the required length.
#[no_mangle]
pub unsafe extern "C" fn v2x_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap);
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                // ensure termination on truncation
                *buf.add(n - 1) = 0;
            }
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn v2x_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates a scenario holding the reference defaults. Never null.
/// Release with [`v2x_scenario_free`].
#[no_mangle]
pub extern "C" fn v2x_scenario_new() -> *mut V2xScenario {
    Box::into_raw(Box::new(V2xScenario { builder: ConfigBuilder::new() }))
}

/// Frees a scenario; null is a no-op.
///
/// # Safety
/// `scenario` must be a pointer returned by [`v2x_scenario_new`] or
/// [`v2x_scenario_from_file`] that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn v2x_scenario_free(scenario: *mut V2xScenario) {
    if !scenario.is_null() {
        drop(unsafe { Box::from_raw(scenario) });
    }
}

/// Loads a scenario from a config file. Returns null on failure, with the
/// message available via [`v2x_last_error_message`].
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn v2x_scenario_from_file(path: *const c_char) -> *mut V2xScenario {
    if path.is_null() {
        set_last_error("path is null");
        return std::ptr::null_mut();
    }
    let path = match unsafe { CStr::from_ptr(path) }.to_str() {
        Ok(p) => p,
        Err(_) => {
            set_last_error("path is not valid UTF-8");
            return std::ptr::null_mut();
        }
    };
    let text = match std::fs::read_to_string(Path::new(path)) {
        Ok(t) => t,
        Err(e) => {
            set_last_error(&format!("{path}: {e}"));
            return std::ptr::null_mut();
        }
    };
    let mut builder = ConfigBuilder::new();
    if let Err(e) = builder.set_document(&text) {
        set_last_error(&e.to_string());
        return std::ptr::null_mut();
    }
    Box::into_raw(Box::new(V2xScenario { builder }))
}

/// Sets one config key. `value` is a raw TOML value; bare identifiers like
/// `mmwave` are also accepted for string keys. Unknown keys and constraint
/// violations are rejected, leaving the scenario unchanged.
///
/// # Safety
/// `scenario` must be a live handle; `key` and `value` must be
/// NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn v2x_scenario_set(
    scenario: *mut V2xScenario,
    key: *const c_char,
    value: *const c_char,
) -> V2xStatus {
    if scenario.is_null() || key.is_null() || value.is_null() {
        return fail(V2xStatus::NullArgument, "scenario, key, and value must be non-null");
    }
    let scenario = unsafe { &mut *scenario };
    let (key, value) = unsafe {
        match (CStr::from_ptr(key).to_str(), CStr::from_ptr(value).to_str()) {
            (Ok(k), Ok(v)) => (k, v),
            _ => return fail(V2xStatus::InvalidUtf8, "key/value must be valid UTF-8"),
        }
    };
    match scenario.builder.set(key, value) {
        Ok(()) => V2xStatus::Ok,
        Err(e) => fail(V2xStatus::InvalidParameter, &e.to_string()),
    }
}

/// Evaluates analytic coverage for the scenario. Writes the coverage and
/// outage probabilities through the out pointers.
///
/// # Safety
/// `scenario` must be a live handle; `out_p_cov` and `out_p_out` must be
/// writable or null (null skips that output).
#[no_mangle]
pub unsafe extern "C" fn v2x_coverage_eval(
    scenario: *const V2xScenario,
    model: V2xVehicleModel,
    road_case: V2xRoadCase,
    out_p_cov: *mut f64,
    out_p_out: *mut f64,
) -> V2xStatus {
    if scenario.is_null() {
        return fail(V2xStatus::NullArgument, "scenario must be non-null");
    }
    let scenario = unsafe { &*scenario };
    let (cfg, _) = match scenario.builder.resolve() {
        Ok(r) => r,
        Err(e) => return fail(V2xStatus::InvalidParameter, &e.to_string()),
    };
    match coverage(&cfg, model.into(), road_case.into(), &QuadratureSpec::default()) {
        Ok(res) => {
            unsafe {
                if !out_p_cov.is_null() {
                    *out_p_cov = res.p_cov;
                }
                if !out_p_out.is_null() {
                    *out_p_out = res.p_out;
                }
            }
            V2xStatus::Ok
        }
        Err(e) => fail(V2xStatus::NumericFailure, &e.to_string()),
    }
}

/// Runs the Monte Carlo estimator for the scenario with its configured seed.
/// Writes the coverage estimate and the 99% confidence half-width.
///
/// # Safety
/// Same pointer contract as [`v2x_coverage_eval`].
#[no_mangle]
pub unsafe extern "C" fn v2x_coverage_simulate(
    scenario: *const V2xScenario,
    model: V2xVehicleModel,
    road_case: V2xRoadCase,
    trials: u64,
    out_p_hat: *mut f64,
    out_ci99: *mut f64,
) -> V2xStatus {
    if scenario.is_null() {
        return fail(V2xStatus::NullArgument, "scenario must be non-null");
    }
    let scenario = unsafe { &*scenario };
    let (cfg, _) = match scenario.builder.resolve() {
        Ok(r) => r,
        Err(e) => return fail(V2xStatus::InvalidParameter, &e.to_string()),
    };
    match estimate_coverage(&cfg, model.into(), road_case.into(), trials, cfg.rng_seed) {
        Ok(est) => {
            unsafe {
                if !out_p_hat.is_null() {
                    *out_p_hat = est.p_hat;
                }
                if !out_ci99.is_null() {
                    *out_ci99 = est.ci99_half_width;
                }
            }
            V2xStatus::Ok
        }
        Err(e) => fail(V2xStatus::NumericFailure, &e.to_string()),
    }
}
