//! C ABI over the `irslink` simulator.
//!
//! Every fallible function returns an [`IrslinkStatus`]. On failure the
//! message is kept per thread and can be read with
//! [`irslink_last_error_message`]. Handles are opaque and must be released
//! with the matching `*_free` function.
//!
//! # Safety
//!
//! Pointer arguments must be null or valid for the access implied by their
//! type. Strings are NUL terminated UTF-8. A handle must not be used after
//! it is freed, nor shared between threads while one of them mutates it.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use irslink::{
    presets, ChannelParams, ConventionalModel, Error, Execution, FadingModel, IrsPanel,
    IrsPanelParams, OutputFormat, RunPlan, SweepResult,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrslinkStatus {
    Ok = 0,
    InvalidInput = 1,
    DegenerateGeometry = 2,
    Config = 3,
    Io = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrslinkFormat {
    Csv = 0,
    Json = 1,
}

/// One row of a sweep result.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IrslinkRow {
    pub x: f64,
    pub rx_power_dbm: f64,
    pub sinr_db: f64,
    pub sinr_db_stddev: f64,
}

/// SINR together with its inputs, all in watts except `sinr_db`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IrslinkLinkBudget {
    pub rx_power: f64,
    pub interference: f64,
    pub noise: f64,
    pub sinr_linear: f64,
    pub sinr_db: f64,
}

/// IRS panel description. Gains are linear, angles in degrees.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrslinkPanel {
    pub element_length: f64,
    pub element_width: f64,
    pub tx_side_elements: u32,
    pub rx_side_elements: u32,
    pub reflection_coefficient: f64,
    pub tx_gain: f64,
    pub rx_gain: f64,
    pub theta_t: f64,
    pub theta_r: f64,
}

/// A parsed scenario and sweep, ready to run.
pub struct IrslinkPlan {
    plan: RunPlan,
}

/// Output of [`irslink_plan_run`].
pub struct IrslinkResults {
    results: Vec<SweepResult>,
    labels: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: IrslinkStatus, msg: &str) -> IrslinkStatus {
    set_last_error(msg);
    status
}

fn status_of(e: &Error) -> IrslinkStatus {
    match e {
        Error::InvalidInput(_) | Error::Field { .. } => IrslinkStatus::InvalidInput,
        Error::DegenerateGeometry(_) => IrslinkStatus::DegenerateGeometry,
        Error::Config { .. } => IrslinkStatus::Config,
        Error::Io(_) => IrslinkStatus::Io,
    }
}

struct Failure(IrslinkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(IrslinkStatus::NullPointer, format!("{what} is null"))
}

fn guard<F>(f: F) -> IrslinkStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IrslinkStatus::Ok,
        Ok(Err(Failure(status, msg))) => fail(status, &msg),
        Err(_) => fail(IrslinkStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Failure(
            IrslinkStatus::InvalidUtf8,
            format!("{what} is not valid UTF-8"),
        )
    })
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

// received power does not depend on the noise floor, any positive value will do
fn channel(frequency_hz: f64, tx_power_w: f64, alpha: f64) -> Result<ChannelParams, Failure> {
    Ok(ChannelParams::new(
        frequency_hz,
        tx_power_w,
        alpha,
        1.0,
        0.0,
    )?)
}

/// Message of the most recent failure on this thread, or "" if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn irslink_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static, human readable name of a status code.
#[no_mangle]
pub extern "C" fn irslink_status_name(status: IrslinkStatus) -> *const c_char {
    let s: &'static CStr = match status {
        IrslinkStatus::Ok => c"ok",
        IrslinkStatus::InvalidInput => c"invalid_input",
        IrslinkStatus::DegenerateGeometry => c"degenerate_geometry",
        IrslinkStatus::Config => c"config",
        IrslinkStatus::Io => c"io",
        IrslinkStatus::NullPointer => c"null_pointer",
        IrslinkStatus::InvalidUtf8 => c"invalid_utf8",
        IrslinkStatus::OutOfRange => c"out_of_range",
        IrslinkStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Carrier wavelength in metres.
#[no_mangle]
pub unsafe extern "C" fn irslink_wavelength(frequency_hz: f64, out: *mut f64) -> IrslinkStatus {
    guard(|| write_out(out, irslink::wavelength(frequency_hz)?))
}

/// Received power of the direct link in watts. `friis` selects the squared
/// wavelength variant.
#[no_mangle]
pub unsafe extern "C" fn irslink_conventional_rx_power(
    frequency_hz: f64,
    tx_power_w: f64,
    path_loss_exponent: f64,
    distance_m: f64,
    fading: f64,
    friis: bool,
    out: *mut f64,
) -> IrslinkStatus {
    guard(|| {
        let ch = channel(frequency_hz, tx_power_w, path_loss_exponent)?;
        let model = if friis {
            ConventionalModel::Friis
        } else {
            ConventionalModel::Paper
        };
        write_out(out, model.rx_power(&ch, distance_m, fading)?)
    })
}

/// Received power through the IRS in watts, for leg lengths `r1` and `r2`.
#[no_mangle]
pub unsafe extern "C" fn irslink_irs_rx_power(
    panel: *const IrslinkPanel,
    frequency_hz: f64,
    tx_power_w: f64,
    r1: f64,
    r2: f64,
    out: *mut f64,
) -> IrslinkStatus {
    guard(|| {
        let p = panel.as_ref().ok_or_else(|| null("panel"))?;
        let panel = IrsPanel::new(IrsPanelParams {
            element_length: p.element_length,
            element_width: p.element_width,
            tx_side_elements: p.tx_side_elements,
            rx_side_elements: p.rx_side_elements,
            reflection_coefficient: p.reflection_coefficient,
            tx_gain: p.tx_gain,
            rx_gain: p.rx_gain,
            theta_t: p.theta_t,
            theta_r: p.theta_r,
        })?;
        if !(r1.is_finite() && r2.is_finite() && r1 > 0.0 && r2 > 0.0) {
            return Err(Failure(
                IrslinkStatus::DegenerateGeometry,
                format!("leg lengths must be positive, got r1 = {r1}, r2 = {r2}"),
            ));
        }
        let ch = channel(frequency_hz, tx_power_w, 2.0)?;
        let origin = irslink::Point3::ORIGIN;
        let irs = irslink::Point3::new(r1, 0.0, 0.0)?;
        let rx = irslink::Point3::new(r1, r2, 0.0)?;
        let geom = irslink::cascade_distances(origin, irs, rx)?;
        write_out(out, irslink::irs_rx_power(&ch, &panel, &geom)?)
    })
}

/// SINR from received power, aggregate interference and noise (watts).
#[no_mangle]
pub unsafe extern "C" fn irslink_sinr(
    rx_power: f64,
    interference: f64,
    noise: f64,
    out: *mut IrslinkLinkBudget,
) -> IrslinkStatus {
    guard(|| {
        let b = irslink::sinr(rx_power, interference, noise)?;
        write_out(
            out,
            IrslinkLinkBudget {
                rx_power: b.rx_power,
                interference: b.interference,
                noise: b.noise,
                sinr_linear: b.sinr_linear,
                sinr_db: b.sinr_db,
            },
        )
    })
}

/// Number of built-in presets.
#[no_mangle]
pub extern "C" fn irslink_preset_count() -> usize {
    presets::NAMES.len()
}

/// Name of preset `index`. The string is static.
#[no_mangle]
pub extern "C" fn irslink_preset_name(index: usize) -> *const c_char {
    const NAMES: [&CStr; 5] = [c"fig1", c"fig2a", c"fig2b", c"fig2c", c"fig2d"];
    NAMES.get(index).map_or(ptr::null(), |s| s.as_ptr())
}

fn boxed_plan(out: *mut *mut IrslinkPlan, plan: RunPlan) -> Result<(), Failure> {
    let h = Box::into_raw(Box::new(IrslinkPlan { plan }));
    unsafe { write_out(out, h) }.inspect_err(|_| unsafe { drop(Box::from_raw(h)) })
}

/// Loads a built-in preset.
#[no_mangle]
pub unsafe extern "C" fn irslink_plan_from_preset(
    name: *const c_char,
    out: *mut *mut IrslinkPlan,
) -> IrslinkStatus {
    guard(|| {
        let name = read_str(name, "preset name")?;
        boxed_plan(out, presets::preset(name)?)
    })
}

/// Parses a scenario document (TOML text, not a path).
#[no_mangle]
pub unsafe extern "C" fn irslink_plan_from_config(
    text: *const c_char,
    out: *mut *mut IrslinkPlan,
) -> IrslinkStatus {
    guard(|| {
        let text = read_str(text, "config text")?;
        boxed_plan(out, irslink::parse_scenario(text)?)
    })
}

/// Number of rows a run will produce.
#[no_mangle]
pub unsafe extern "C" fn irslink_plan_points(
    plan: *const IrslinkPlan,
    out: *mut usize,
) -> IrslinkStatus {
    guard(|| {
        let h = plan.as_ref().ok_or_else(|| null("plan"))?;
        write_out(out, h.plan.points())
    })
}

#[no_mangle]
pub unsafe extern "C" fn irslink_plan_set_seed(plan: *mut IrslinkPlan, seed: u64) -> IrslinkStatus {
    guard(|| {
        let h = plan.as_mut().ok_or_else(|| null("plan"))?;
        h.plan.spec = h.plan.spec.with_seed(seed);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn irslink_plan_set_trials(
    plan: *mut IrslinkPlan,
    trials: u64,
) -> IrslinkStatus {
    guard(|| {
        let h = plan.as_mut().ok_or_else(|| null("plan"))?;
        h.plan.spec = h.plan.spec.with_trials(trials)?;
        Ok(())
    })
}

/// Switches between deterministic (false) and Rayleigh (true) fading.
#[no_mangle]
pub unsafe extern "C" fn irslink_plan_set_rayleigh(
    plan: *mut IrslinkPlan,
    rayleigh: bool,
) -> IrslinkStatus {
    guard(|| {
        let h = plan.as_mut().ok_or_else(|| null("plan"))?;
        h.plan.scenario.fading = if rayleigh {
            FadingModel::RayleighExponential { seed: 0 }
        } else {
            FadingModel::Deterministic
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn irslink_plan_free(plan: *mut IrslinkPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Runs the plan. `serial` disables the thread pool; results are identical
/// either way.
#[no_mangle]
pub unsafe extern "C" fn irslink_plan_run(
    plan: *const IrslinkPlan,
    serial: bool,
    out: *mut *mut IrslinkResults,
) -> IrslinkStatus {
    guard(|| {
        let h = plan.as_ref().ok_or_else(|| null("plan"))?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let mut plan = h.plan.clone();
        plan.scenario.fading = plan.scenario.fading.with_seed(plan.spec.seed);
        let exec = if serial {
            Execution::Serial
        } else {
            Execution::Parallel
        };
        let results = plan.run(exec)?;
        let labels = results
            .iter()
            .map(|r| CString::new(r.scenario_label.replace('\0', " ")).unwrap_or_default())
            .collect();
        out.write(Box::into_raw(Box::new(IrslinkResults { results, labels })));
        Ok(())
    })
}

/// Number of curves (one per scenario label).
#[no_mangle]
pub unsafe extern "C" fn irslink_results_count(results: *const IrslinkResults) -> usize {
    results.as_ref().map_or(0, |r| r.results.len())
}

/// Label of curve `index`, owned by the results handle.
#[no_mangle]
pub unsafe extern "C" fn irslink_results_label(
    results: *const IrslinkResults,
    index: usize,
) -> *const c_char {
    results
        .as_ref()
        .and_then(|r| r.labels.get(index))
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// Number of rows in curve `index`, 0 if out of range.
#[no_mangle]
pub unsafe extern "C" fn irslink_results_row_count(
    results: *const IrslinkResults,
    index: usize,
) -> usize {
    results
        .as_ref()
        .and_then(|r| r.results.get(index))
        .map_or(0, |r| r.rows.len())
}

#[no_mangle]
pub unsafe extern "C" fn irslink_results_row(
    results: *const IrslinkResults,
    index: usize,
    row: usize,
    out: *mut IrslinkRow,
) -> IrslinkStatus {
    guard(|| {
        let r = results.as_ref().ok_or_else(|| null("results"))?;
        let curve = r.results.get(index).ok_or_else(|| {
            Failure(
                IrslinkStatus::OutOfRange,
                format!("curve {index} of {}", r.results.len()),
            )
        })?;
        let v = curve.rows.get(row).ok_or_else(|| {
            Failure(
                IrslinkStatus::OutOfRange,
                format!("row {row} of {}", curve.rows.len()),
            )
        })?;
        write_out(
            out,
            IrslinkRow {
                x: v.x,
                rx_power_dbm: v.rx_power_dbm,
                sinr_db: v.sinr_db,
                sinr_db_stddev: v.sinr_db_stddev,
            },
        )
    })
}

/// Renders all curves as CSV or JSON, the same bytes the CLI writes.
/// Release the string with [`irslink_string_free`].
#[no_mangle]
pub unsafe extern "C" fn irslink_results_render(
    results: *const IrslinkResults,
    format: IrslinkFormat,
    out: *mut *mut c_char,
) -> IrslinkStatus {
    guard(|| {
        let r = results.as_ref().ok_or_else(|| null("results"))?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let format = match format {
            IrslinkFormat::Csv => OutputFormat::Csv,
            IrslinkFormat::Json => OutputFormat::Json,
        };
        let mut buf = Vec::new();
        irslink::emit_results(&r.results, format, &mut buf)?;
        let s = CString::new(buf)
            .map_err(|_| Failure(IrslinkStatus::Io, "output contains NUL".into()))?;
        out.write(s.into_raw());
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn irslink_results_free(results: *mut IrslinkResults) {
    if !results.is_null() {
        drop(Box::from_raw(results));
    }
}

#[no_mangle]
pub unsafe extern "C" fn irslink_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
