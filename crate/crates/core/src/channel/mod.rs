//! Received-power models for the direct small-cell link and the cascaded
//! transmitter → IRS → receiver link.
//!
//! Direct link:
//!
//! ```text
//! P_r = λ · L · P_t / (r^α · 16π²)
//! ```
//!
//! with λ to the first power. [`ConventionalModel::Friis`] gives the textbook
//! λ² form for comparison.
//!
//! Cascaded link:
//!
//! ```text
//! P_r = l_x·w_y·m²·n²·λ²·G_T·G_R·G·cosθ_T·cosθ_R·A² / (64π³·(r1·r2)²) · P_t
//! G   = 4π·l_x·w_y / λ²
//! ```
//!
//! After substituting `G` the wavelength cancels.

mod fading;
pub mod units;

pub use fading::{sample_fading, sample_fading_on, FadingLane, FadingModel, FadingStream};
pub use units::{convert_power, thermal_noise_watts, PowerUnit};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CascadeGeometry;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn wavelength(frequency_hz: f64) -> Result<f64> {
    if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
        return Err(Error::field(
            "frequency_hz",
            format!("frequency_hz must be positive, got {frequency_hz}"),
        ));
    }
    Ok(SPEED_OF_LIGHT / frequency_hz)
}

fn check(field: &'static str, value: f64, ok: bool, constraint: &str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::field(
            field,
            format!("{field} must be {constraint}, got {value}"),
        ))
    }
}

/// Carrier, transmit power, path loss and the noise/interference floor of a
/// link. All powers in watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams {
    carrier_frequency: f64,
    tx_power: f64,
    path_loss_exponent: f64,
    noise_power: f64,
    interference_power: f64,
}

impl ChannelParams {
    pub fn new(
        carrier_frequency: f64,
        tx_power: f64,
        path_loss_exponent: f64,
        noise_power: f64,
        interference_power: f64,
    ) -> Result<Self> {
        check(
            "frequency_hz",
            carrier_frequency,
            carrier_frequency > 0.0,
            "positive",
        )?;
        check("tx_power", tx_power, tx_power > 0.0, "positive")?;
        check(
            "path_loss_exponent",
            path_loss_exponent,
            path_loss_exponent >= 0.0,
            "nonnegative",
        )?;
        check("noise", noise_power, noise_power > 0.0, "positive")?;
        check(
            "interference",
            interference_power,
            interference_power >= 0.0,
            "nonnegative",
        )?;
        Ok(ChannelParams {
            carrier_frequency,
            tx_power,
            path_loss_exponent,
            noise_power,
            interference_power,
        })
    }

    pub fn carrier_frequency(&self) -> f64 {
        self.carrier_frequency
    }

    pub fn tx_power(&self) -> f64 {
        self.tx_power
    }

    pub fn path_loss_exponent(&self) -> f64 {
        self.path_loss_exponent
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    pub fn interference_power(&self) -> f64 {
        self.interference_power
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }

    pub fn with_tx_power(self, tx_power: f64) -> Result<Self> {
        Self::new(
            self.carrier_frequency,
            tx_power,
            self.path_loss_exponent,
            self.noise_power,
            self.interference_power,
        )
    }

    pub fn with_carrier_frequency(self, frequency: f64) -> Result<Self> {
        Self::new(
            frequency,
            self.tx_power,
            self.path_loss_exponent,
            self.noise_power,
            self.interference_power,
        )
    }

    pub fn with_path_loss_exponent(self, alpha: f64) -> Result<Self> {
        Self::new(
            self.carrier_frequency,
            self.tx_power,
            alpha,
            self.noise_power,
            self.interference_power,
        )
    }

    pub fn with_interference_power(self, interference: f64) -> Result<Self> {
        Self::new(
            self.carrier_frequency,
            self.tx_power,
            self.path_loss_exponent,
            self.noise_power,
            interference,
        )
    }
}

/// Raw IRS panel description, validated by [`IrsPanel::new`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrsPanelParams {
    /// Element length l_x, meters.
    pub element_length: f64,
    /// Element width w_y, meters.
    pub element_width: f64,
    /// m
    pub tx_side_elements: u32,
    /// n
    pub rx_side_elements: u32,
    /// A, in (0, 1].
    pub reflection_coefficient: f64,
    /// G_T, linear.
    pub tx_gain: f64,
    /// G_R, linear.
    pub rx_gain: f64,
    /// θ_T in degrees, [0, 90).
    pub theta_t: f64,
    /// θ_R in degrees, [0, 90).
    pub theta_r: f64,
}

/// A validated IRS panel. Angles are kept in degrees with their cosines
/// precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrsPanel {
    params: IrsPanelParams,
    cos_t: f64,
    cos_r: f64,
}

fn check_angle(field: &'static str, deg: f64) -> Result<()> {
    if deg.is_finite() && (0.0..90.0).contains(&deg) {
        Ok(())
    } else {
        Err(Error::field(
            field,
            format!("{field} must lie in [0, 90), got {deg}"),
        ))
    }
}

impl IrsPanel {
    pub fn new(p: IrsPanelParams) -> Result<Self> {
        check(
            "element_length",
            p.element_length,
            p.element_length > 0.0,
            "positive",
        )?;
        check(
            "element_width",
            p.element_width,
            p.element_width > 0.0,
            "positive",
        )?;
        if p.tx_side_elements < 1 {
            return Err(Error::field(
                "tx_elements",
                "tx_elements must be at least 1",
            ));
        }
        if p.rx_side_elements < 1 {
            return Err(Error::field(
                "rx_elements",
                "rx_elements must be at least 1",
            ));
        }
        let a = p.reflection_coefficient;
        check(
            "reflection_coefficient",
            a,
            a > 0.0 && a <= 1.0,
            "in (0, 1]",
        )?;
        check("tx_gain", p.tx_gain, p.tx_gain > 0.0, "positive")?;
        check("rx_gain", p.rx_gain, p.rx_gain > 0.0, "positive")?;
        check_angle("theta_t", p.theta_t)?;
        check_angle("theta_r", p.theta_r)?;
        Ok(IrsPanel {
            params: p,
            cos_t: p.theta_t.to_radians().cos(),
            cos_r: p.theta_r.to_radians().cos(),
        })
    }

    pub fn params(&self) -> &IrsPanelParams {
        &self.params
    }

    pub fn theta_t(&self) -> f64 {
        self.params.theta_t
    }

    pub fn theta_r(&self) -> f64 {
        self.params.theta_r
    }

    pub fn cos_theta_t(&self) -> f64 {
        self.cos_t
    }

    pub fn cos_theta_r(&self) -> f64 {
        self.cos_r
    }

    /// Element area l_x·w_y, m².
    pub fn element_area(&self) -> f64 {
        self.params.element_length * self.params.element_width
    }

    pub fn with_angles(&self, theta_t: f64, theta_r: f64) -> Result<Self> {
        IrsPanel::new(IrsPanelParams {
            theta_t,
            theta_r,
            ..self.params
        })
    }
}

/// Which form of the direct-link power equation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionalModel {
    /// λ·L·P_t / (r^α·16π²)
    #[default]
    Paper,
    /// λ²·L·P_t / ((4π)²·r^α)
    Friis,
}

impl ConventionalModel {
    pub fn name(&self) -> &'static str {
        match self {
            ConventionalModel::Paper => "paper",
            ConventionalModel::Friis => "friis",
        }
    }

    pub fn rx_power(&self, params: &ChannelParams, r: f64, fading: f64) -> Result<f64> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::degenerate(format!(
                "link distance must be positive, got {r} m"
            )));
        }
        if !(fading.is_finite() && fading > 0.0) {
            return Err(Error::invalid(format!(
                "fading factor must be positive, got {fading}"
            )));
        }
        let lambda = params.wavelength();
        let spread = r.powf(params.path_loss_exponent) * 16.0 * PI * PI;
        let aperture = match self {
            ConventionalModel::Paper => lambda,
            ConventionalModel::Friis => lambda * lambda,
        };
        Ok(aperture * fading * params.tx_power / spread)
    }
}

impl std::str::FromStr for ConventionalModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(ConventionalModel::Paper),
            "friis" => Ok(ConventionalModel::Friis),
            _ => Err(Error::field(
                "conventional_model",
                format!("conventional_model must be `paper` or `friis`, got `{s}`"),
            )),
        }
    }
}

/// Direct-link received power, watts, in the default (`Paper`) form.
pub fn conventional_rx_power(params: &ChannelParams, r: f64, fading: f64) -> Result<f64> {
    ConventionalModel::Paper.rx_power(params, r, fading)
}

/// IRS scattering gain `G = 4π·l_x·w_y / λ²`.
pub fn irs_scattering_gain(panel: &IrsPanel, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::invalid(format!(
            "wavelength must be positive, got {lambda} m"
        )));
    }
    Ok(4.0 * PI * panel.element_area() / (lambda * lambda))
}

/// Cascaded received power through the IRS, watts, without fading.
pub fn irs_rx_power(
    params: &ChannelParams,
    panel: &IrsPanel,
    geom: &CascadeGeometry,
) -> Result<f64> {
    let (r1, r2) = (geom.r1(), geom.r2());
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::degenerate(format!(
            "cascade legs must be positive, got r1={r1} m, r2={r2} m"
        )));
    }
    let lambda = params.wavelength();
    let g = irs_scattering_gain(panel, lambda)?;
    let p = panel.params();
    let m = f64::from(p.tx_side_elements);
    let n = f64::from(p.rx_side_elements);
    let a = p.reflection_coefficient;
    let numerator = panel.element_area()
        * m
        * m
        * n
        * n
        * lambda
        * lambda
        * p.tx_gain
        * p.rx_gain
        * g
        * panel.cos_theta_t()
        * panel.cos_theta_r()
        * a
        * a;
    let legs = r1 * r2;
    Ok(numerator / (64.0 * PI.powi(3) * legs * legs) * params.tx_power)
}
