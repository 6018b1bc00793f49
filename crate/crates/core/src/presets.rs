//! Built-in experiments. Each preset is an ordinary configuration document
//! run through [`parse_scenario`], so `presets --show` output can be saved
//! and edited as a starting point.
//!
//! No parameter table is published for these curves, so the values below are
//! chosen defaults: a 3.5 GHz small cell at 30 dBm with free-space exponent,
//! thermal noise over 100 MHz, and a constant interference floor picked so
//! that each curve lands in the range reported for its figure. Every such
//! choice is listed under `assumptions` and ends up in the output metadata.

use crate::config::{parse_scenario, RunPlan};
use crate::error::{Error, Result};

/// Radius of the simulated cell, meters.
pub const CELL_RADIUS_M: f64 = 100.0;

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub config: &'static str,
}

const FIG1: &str = r#"[scenario]
label = "fig1"
mode = "conventional"
conventional_model = "paper"
assumptions = [
  "cell radius 100 m; cell edge at 100 m from the transmitter",
  "default parameter set: 3.5 GHz carrier, 30 dBm transmit power, path-loss exponent 2",
  "noise: thermal k*T*B at 290 K over 100 MHz",
  "interference: constant -48.6 dBm, chosen to place SINR near 24 dB at 12.5 m",
  "receiver moved along +x from the transmitter; x is the transmitter-receiver distance",
]

[channel]
frequency_hz = 3.5e9
tx_power_dbm = 30.0
path_loss_exponent = 2.0
noise_bandwidth_hz = 1.0e8

[interference]
mode = "constant"
power_dbm = -48.6

[geometry]
tx = [0.0, 0.0, 0.0]
rx_direction = [1.0, 0.0, 0.0]

[fading]
mode = "deterministic"

[sweep]
variable = "rx_distance"
start = 5.0
stop = 100.0
steps = 20
trials = 1
seed = 0
"#;

/// IRS template; `{THETA_T}`, `{THETA_R}`, `{IRS_X}`, `{LABEL}` and
/// `{PLACEMENT}` are filled in per preset.
const FIG2_TEMPLATE: &str = r#"[scenario]
label = "{LABEL}"
mode = "irs"
conventional_model = "paper"
assumptions = [
  "cell radius 100 m; cell edge at 100 m from the transmitter",
  "default parameter set: 3.5 GHz carrier, 30 dBm transmit power, path-loss exponent 2",
  "panel: 64 x 64 elements of 42.8 mm x 42.8 mm, reflection coefficient 0.9, 10 dBi gains",
  "noise: thermal k*T*B at 290 K over 100 MHz",
  "interference: constant -86 dBm, chosen to place the 60/60 cell-edge SINR near 44 dB",
  "{PLACEMENT}",
  "receiver moved along +y from the IRS; x is the IRS-receiver distance r2 with r1 fixed",
  "transmit and receive angles held fixed over the sweep",
]

[channel]
frequency_hz = 3.5e9
tx_power_dbm = 30.0
path_loss_exponent = 2.0
noise_bandwidth_hz = 1.0e8

[interference]
mode = "constant"
power_dbm = -86.0

[panel]
element_length_m = 0.0428
element_width_m = 0.0428
tx_elements = 64
rx_elements = 64
reflection_coefficient = 0.9
tx_gain_dbi = 10.0
rx_gain_dbi = 10.0
theta_t = {THETA_T}
theta_r = {THETA_R}

[geometry]
tx = [0.0, 0.0, 0.0]
irs = [{IRS_X}, 0.0, 0.0]
rx_direction = [0.0, 1.0, 0.0]

[fading]
mode = "deterministic"

[sweep]
variable = "rx_distance"
start = 5.0
stop = 100.0
steps = 20
trials = 1
seed = 0
"#;

const EDGE: &str = "IRS at the cell edge, 100 m from the transmitter";
const MID: &str = "IRS 50 m from the cell edge (mid-cell, 50 m from the transmitter)";

fn fig2(label: &str, theta_t: f64, theta_r: f64, irs_x: f64, placement: &str) -> String {
    FIG2_TEMPLATE
        .replace("{LABEL}", label)
        .replace("{THETA_T}", &format!("{theta_t:.1}"))
        .replace("{THETA_R}", &format!("{theta_r:.1}"))
        .replace("{IRS_X}", &format!("{irs_x:.1}"))
        .replace("{PLACEMENT}", placement)
}

pub const NAMES: [&str; 5] = ["fig1", "fig2a", "fig2b", "fig2c", "fig2d"];

pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig1" => "conventional small cell: SINR vs. transmitter-receiver distance",
        "fig2a" => "IRS-assisted, theta_t = 45, theta_r = 45, IRS at the cell edge",
        "fig2b" => "IRS-assisted, theta_t = 60, theta_r = 60, IRS at the cell edge",
        "fig2c" => "IRS-assisted, theta_t = 45, theta_r = 60, IRS at the cell edge",
        "fig2d" => "IRS-assisted, theta_t = 60, theta_r = 60, IRS 50 m from the cell edge",
        _ => return None,
    })
}

/// The configuration document behind a preset.
pub fn preset_config(name: &str) -> Result<String> {
    let edge = CELL_RADIUS_M;
    let mid = CELL_RADIUS_M - 50.0;
    Ok(match name {
        "fig1" => FIG1.to_string(),
        "fig2a" => fig2("fig2a", 45.0, 45.0, edge, EDGE),
        "fig2b" => fig2("fig2b", 60.0, 60.0, edge, EDGE),
        "fig2c" => fig2("fig2c", 45.0, 60.0, edge, EDGE),
        "fig2d" => fig2("fig2d", 60.0, 60.0, mid, MID),
        _ => {
            return Err(Error::invalid(format!(
                "unknown preset `{name}`; expected one of {}",
                NAMES.join(", ")
            )))
        }
    })
}

pub fn preset(name: &str) -> Result<RunPlan> {
    parse_scenario(&preset_config(name)?)
}
