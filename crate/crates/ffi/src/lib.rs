//! C ABI over the `pipeclimber` library.
//!
//! Objects are opaque handles created by `*_parse` / `pc_simulate` and
//! released with the matching `*_free`. Every fallible call returns a
//! [`PcStatus`]; on failure [`pc_last_error_message`] describes the error and,
//! for parse errors, [`pc_last_error_position`] gives its line and column.
//! Strings returned through `char **` are owned by the caller and released
//! with [`pc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pipeclimber::bend::{self, BendError};
use pipeclimber::design::{self, DesignError, FrictionSign, MotorSpec, ReportParams, RobotDesign};
use pipeclimber::netspec::{self, SourceError};
use pipeclimber::pipe::PipeNetwork;
use pipeclimber::sim::{self, SimConfig, SimError, TraversalTrace};

/// Parsed pipe network.
pub struct PcNetwork(PipeNetwork);

/// Parsed robot design.
pub struct PcDesign(RobotDesign);

/// Result of a traversal simulation.
pub struct PcTrace(TraversalTrace);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Infeasible = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcFrictionSign {
    Paper = 0,
    Physical = 1,
}

impl From<PcFrictionSign> for FrictionSign {
    fn from(s: PcFrictionSign) -> Self {
        match s {
            PcFrictionSign::Paper => FrictionSign::Paper,
            PcFrictionSign::Physical => FrictionSign::Physical,
        }
    }
}

/// Inputs for [`pc_design_report_json`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PcReportParams {
    /// m/s².
    pub gravity: f64,
    /// m/s².
    pub accel: f64,
    pub rolling_coefficient: f64,
    pub safety_factor: f64,
    pub friction_sign: PcFrictionSign,
    /// N·m.
    pub motor_torque: f64,
}

/// Inputs for [`pc_simulate`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PcSimConfig {
    /// mm/s.
    pub velocity: f64,
    /// s.
    pub dt: f64,
    /// degrees.
    pub roll: f64,
    /// m/s².
    pub gravity: f64,
    pub friction_sign: PcFrictionSign,
}

struct LastError {
    message: CString,
    position: Option<(usize, usize)>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

struct Failure {
    status: PcStatus,
    message: String,
    position: Option<(usize, usize)>,
}

impl Failure {
    fn new(status: PcStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
            position: None,
        }
    }
}

impl From<SourceError> for Failure {
    fn from(e: SourceError) -> Self {
        Self {
            status: PcStatus::Parse,
            message: e.to_string(),
            position: Some((e.line, e.column)),
        }
    }
}

impl From<DesignError> for Failure {
    fn from(e: DesignError) -> Self {
        Failure::new(PcStatus::Validation, e.to_string())
    }
}

impl From<BendError> for Failure {
    fn from(e: BendError) -> Self {
        let status = match e {
            BendError::Invalid { .. } => PcStatus::Validation,
            _ => PcStatus::Infeasible,
        };
        Failure::new(status, e.to_string())
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        let status = match e {
            SimError::InfeasibleBend { .. } | SimError::NoWallContact { .. } => {
                PcStatus::Infeasible
            }
            _ => PcStatus::Validation,
        };
        Failure::new(status, e.to_string())
    }
}

fn set_last_error(f: Failure) -> PcStatus {
    let message = CString::new(f.message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(LastError {
            message,
            position: f.position,
        })
    });
    f.status
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PcStatus::Ok,
        Ok(Err(f)) => set_last_error(f),
        Err(_) => set_last_error(Failure::new(PcStatus::Panic, "internal panic")),
    }
}

fn null() -> Failure {
    Failure::new(
        PcStatus::NullArgument,
        "a required pointer argument was null",
    )
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(PcStatus::InvalidUtf8, "input is not valid UTF-8"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn store<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(null())
    } else {
        Ok(())
    }
}

fn owned(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .unwrap_or_default()
        .into_raw()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |e| e.message.as_ptr())
    })
}

/// Writes the 1-based line and column of the last parse error on this thread.
/// Returns false when the last error had no source position.
///
/// # Safety
/// `line` and `column` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_last_error_position(line: *mut usize, column: *mut usize) -> bool {
    let pos = LAST_ERROR.with(|slot| slot.borrow().as_ref().and_then(|e| e.position));
    match pos {
        Some((l, c)) if !line.is_null() && !column.is_null() => {
            line.write(l);
            column.write(c);
            true
        }
        _ => false,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn pc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `.pcn` text into a new network handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_network_parse(
    text: *const c_char,
    out: *mut *mut PcNetwork,
) -> PcStatus {
    guard(|| {
        check_out(out)?;
        let net = netspec::parse_network(c_str(text)?)?;
        store(out, Box::into_raw(Box::new(PcNetwork(net))))
    })
}

/// # Safety
/// `network` must be NULL or a handle from [`pc_network_parse`], freed once.
#[no_mangle]
pub unsafe extern "C" fn pc_network_free(network: *mut PcNetwork) {
    if !network.is_null() {
        drop(Box::from_raw(network));
    }
}

/// Centerline length in mm.
///
/// # Safety
/// `network` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_network_total_length(
    network: *const PcNetwork,
    out: *mut f64,
) -> PcStatus {
    guard(|| store(out, handle(network)?.0.total_arc_length()))
}

/// Canonical `.pcn` text of a network.
///
/// # Safety
/// `network` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_network_emit(
    network: *const PcNetwork,
    out: *mut *mut c_char,
) -> PcStatus {
    guard(|| {
        check_out(out)?;
        store(out, owned(netspec::emit_network(&handle(network)?.0)))
    })
}

/// Parses `.pcr` text into a new design handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_design_parse(text: *const c_char, out: *mut *mut PcDesign) -> PcStatus {
    guard(|| {
        check_out(out)?;
        let d = netspec::parse_design(c_str(text)?)?;
        store(out, Box::into_raw(Box::new(PcDesign(d))))
    })
}

/// # Safety
/// `design` must be NULL or a handle from [`pc_design_parse`], freed once.
#[no_mangle]
pub unsafe extern "C" fn pc_design_free(design: *mut PcDesign) {
    if !design.is_null() {
        drop(Box::from_raw(design));
    }
}

/// Canonical `.pcr` text of a design.
///
/// # Safety
/// `design` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_design_emit(
    design: *const PcDesign,
    out: *mut *mut c_char,
) -> PcStatus {
    guard(|| {
        check_out(out)?;
        store(out, owned(netspec::emit_design(&handle(design)?.0)))
    })
}

/// Spring stiffness (N/m) that holds the robot in a vertical pipe on static friction.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_required_stiffness(
    mass_kg: f64,
    preload_m: f64,
    mu_static: f64,
    gravity: f64,
    n_modules: u32,
    springs_per_module: u32,
    out: *mut f64,
) -> PcStatus {
    guard(|| {
        let k = design::required_stiffness(
            mass_kg,
            preload_m,
            mu_static,
            gravity,
            n_modules,
            springs_per_module,
        )?;
        store(out, k)
    })
}

/// Robot minimum-diameter band (mm) for a bend of centerline radius `radius`.
///
/// # Safety
/// `lower` and `upper` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_min_diameter_bounds(
    radius: f64,
    diameter: f64,
    angle_deg: f64,
    lower: *mut f64,
    upper: *mut f64,
) -> PcStatus {
    guard(|| {
        if lower.is_null() || upper.is_null() {
            return Err(null());
        }
        let b = bend::min_diameter_bounds(radius, diameter, angle_deg)?;
        store(lower, b.d_lower)?;
        store(upper, b.d_upper)
    })
}

/// Longest body (mm) of minimum diameter `d` that fits through the bend.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_max_length(
    radius: f64,
    diameter: f64,
    d: f64,
    out: *mut f64,
) -> PcStatus {
    guard(|| store(out, bend::max_length(radius, diameter, d)?))
}

#[no_mangle]
pub extern "C" fn pc_report_params_default() -> PcReportParams {
    let p = ReportParams::default();
    PcReportParams {
        gravity: p.gravity,
        accel: p.accel,
        rolling_coefficient: p.c_r,
        safety_factor: p.safety_factor,
        friction_sign: PcFrictionSign::Paper,
        motor_torque: p.motor.stall_torque,
    }
}

/// Design report as JSON. `params` may be NULL for defaults.
///
/// # Safety
/// `design` must be a live handle; `params` NULL or valid; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_design_report_json(
    design: *const PcDesign,
    params: *const PcReportParams,
    out: *mut *mut c_char,
) -> PcStatus {
    guard(|| {
        check_out(out)?;
        let d = handle(design)?;
        let p = params
            .as_ref()
            .copied()
            .unwrap_or_else(|| pc_report_params_default());
        let params = ReportParams {
            gravity: p.gravity,
            accel: p.accel,
            c_r: p.rolling_coefficient,
            safety_factor: p.safety_factor,
            friction_sign: p.friction_sign.into(),
            motor: MotorSpec::with_torque(p.motor_torque),
        };
        let report = design::design_report(&d.0, &params)?;
        store(out, owned(report.to_json()))
    })
}

#[no_mangle]
pub extern "C" fn pc_sim_config_default() -> PcSimConfig {
    let c = SimConfig::default();
    PcSimConfig {
        velocity: c.velocity,
        dt: c.dt,
        roll: c.roll,
        gravity: c.gravity,
        friction_sign: PcFrictionSign::Paper,
    }
}

/// Runs a traversal. `config` may be NULL for defaults.
///
/// # Safety
/// `network` and `design` must be live handles; `config` NULL or valid;
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_simulate(
    network: *const PcNetwork,
    design: *const PcDesign,
    config: *const PcSimConfig,
    out: *mut *mut PcTrace,
) -> PcStatus {
    guard(|| {
        check_out(out)?;
        let (n, d) = (handle(network)?, handle(design)?);
        let c = config
            .as_ref()
            .copied()
            .unwrap_or_else(|| pc_sim_config_default());
        let cfg = SimConfig {
            velocity: c.velocity,
            dt: c.dt,
            roll: c.roll,
            gravity: c.gravity,
            friction_sign: c.friction_sign.into(),
            ..SimConfig::default()
        };
        let trace = sim::simulate(&n.0, &d.0, &cfg)?;
        store(out, Box::into_raw(Box::new(PcTrace(trace))))
    })
}

/// # Safety
/// `trace` must be NULL or a handle from [`pc_simulate`], freed once.
#[no_mangle]
pub unsafe extern "C" fn pc_trace_free(trace: *mut PcTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Number of time steps, or 0 for NULL.
///
/// # Safety
/// `trace` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_trace_row_count(trace: *const PcTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.0.rows.len())
}

/// Minimum slip margin over all steps and modules, N.
///
/// # Safety
/// `trace` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_trace_min_slip_margin(
    trace: *const PcTrace,
    out: *mut f64,
) -> PcStatus {
    guard(|| store(out, handle(trace)?.0.min_slip_margin()))
}

/// Full trace as CSV text.
///
/// # Safety
/// `trace` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_trace_csv(trace: *const PcTrace, out: *mut *mut c_char) -> PcStatus {
    guard(|| {
        check_out(out)?;
        store(out, owned(handle(trace)?.0.to_csv_string()))
    })
}

/// Writes the trace CSV to `path`.
///
/// # Safety
/// `trace` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pc_trace_write_csv(
    trace: *const PcTrace,
    path: *const c_char,
) -> PcStatus {
    guard(|| {
        let t = handle(trace)?;
        let path = c_str(path)?;
        let io = |e: std::io::Error| Failure::new(PcStatus::Io, format!("{path}: {e}"));
        let file = std::fs::File::create(path).map_err(io)?;
        let mut w = std::io::BufWriter::new(file);
        t.0.write_csv(&mut w).map_err(io)?;
        std::io::Write::flush(&mut w).map_err(io)
    })
}

/// Traversal summary as JSON.
///
/// # Safety
/// `trace` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pc_trace_summary_json(
    trace: *const PcTrace,
    out: *mut *mut c_char,
) -> PcStatus {
    guard(|| {
        check_out(out)?;
        store(out, owned(handle(trace)?.0.summarize().to_json()))
    })
}
