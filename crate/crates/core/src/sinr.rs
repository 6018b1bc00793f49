//! Downlink SINR: received power over interference plus noise. The same
//! ratio serves the direct and the IRS-assisted link.

use serde::Serialize;

use crate::channel::{ChannelParams, ConventionalModel, FadingLane, FadingModel, FadingStream};
use crate::error::{Error, Result};
use crate::geometry::{distance, Point3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkBudget {
    pub rx_power: f64,
    pub interference: f64,
    pub noise: f64,
    pub sinr_linear: f64,
    pub sinr_db: f64,
}

pub fn sinr(rx_power: f64, interference: f64, noise: f64) -> Result<LinkBudget> {
    if !(rx_power.is_finite() && rx_power > 0.0) {
        return Err(Error::invalid(format!(
            "received power must be positive, got {rx_power} W"
        )));
    }
    if !(interference.is_finite() && interference >= 0.0) {
        return Err(Error::invalid(format!(
            "interference must be nonnegative, got {interference} W"
        )));
    }
    if !(noise.is_finite() && noise > 0.0) {
        return Err(Error::invalid(format!(
            "noise must be positive, got {noise} W"
        )));
    }
    let sinr_linear = rx_power / (interference + noise);
    Ok(LinkBudget {
        rx_power,
        interference,
        noise,
        sinr_linear,
        sinr_db: 10.0 * sinr_linear.log10(),
    })
}

/// An interfering transmitter seen by the receiver through the direct-link
/// model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interferer {
    pub params: ChannelParams,
    pub position: Point3,
}

/// Source of the `Intf.` term.
#[derive(Debug, Clone, PartialEq)]
pub enum InterfererSet {
    /// A fixed interference power in watts.
    ConstantPower(f64),
    ModeledInterferers(Vec<Interferer>),
}

impl InterfererSet {
    pub fn constant(watts: f64) -> Result<Self> {
        if !(watts.is_finite() && watts >= 0.0) {
            return Err(Error::field(
                "interference",
                format!("interference must be nonnegative, got {watts} W"),
            ));
        }
        Ok(InterfererSet::ConstantPower(watts))
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            InterfererSet::ConstantPower(_) => "constant",
            InterfererSet::ModeledInterferers(_) => "modeled",
        }
    }

    /// Number of fading draws one evaluation consumes.
    pub fn draws_per_evaluation(&self) -> u64 {
        match self {
            InterfererSet::ConstantPower(_) => 0,
            InterfererSet::ModeledInterferers(v) => v.len() as u64,
        }
    }
}

/// Total interference at `rx`, evaluated with the `Paper` direct-link model.
pub fn aggregate_interference(
    set: &InterfererSet,
    rx: Point3,
    fading: FadingModel,
    stream_base: u64,
) -> Result<f64> {
    aggregate_interference_with(ConventionalModel::Paper, set, rx, fading, stream_base)
}

/// Interferer `k` draws its fading factor at index `stream_base + k` on the
/// interference lane.
pub fn aggregate_interference_with(
    model: ConventionalModel,
    set: &InterfererSet,
    rx: Point3,
    fading: FadingModel,
    stream_base: u64,
) -> Result<f64> {
    match set {
        InterfererSet::ConstantPower(w) => Ok(*w),
        InterfererSet::ModeledInterferers(list) => {
            let mut draws = FadingStream::new(fading, FadingLane::Interference, stream_base);
            let mut total = 0.0;
            for intf in list {
                let r = distance(intf.position, rx);
                if r <= 0.0 {
                    return Err(Error::degenerate(format!(
                        "interferer at {} coincides with the receiver",
                        intf.position
                    )));
                }
                total += model.rx_power(&intf.params, r, draws.next_factor())?;
            }
            Ok(total)
        }
    }
}
