//! Power-unit conversions. Models compute in watts and linear ratios; dB and
//! dBm only appear at I/O boundaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Reference noise temperature, K.
pub const REFERENCE_TEMPERATURE_K: f64 = 290.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerUnit {
    Watts,
    Dbm,
    /// A dimensionless ratio in linear scale.
    Linear,
    /// A dimensionless ratio in decibels.
    Db,
}

impl PowerUnit {
    fn is_absolute(self) -> bool {
        matches!(self, PowerUnit::Watts | PowerUnit::Dbm)
    }
}

pub fn watts_to_dbm(watts: f64) -> Result<f64> {
    if !(watts.is_finite() && watts > 0.0) {
        return Err(Error::invalid(format!(
            "power must be positive and finite to express in dBm, got {watts} W"
        )));
    }
    Ok(10.0 * (watts / 1e-3).log10())
}

pub fn dbm_to_watts(dbm: f64) -> Result<f64> {
    if !dbm.is_finite() {
        return Err(Error::invalid(format!(
            "dBm value must be finite, got {dbm}"
        )));
    }
    Ok(1e-3 * 10f64.powf(dbm / 10.0))
}

pub fn ratio_to_db(ratio: f64) -> Result<f64> {
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(Error::invalid(format!(
            "ratio must be positive and finite to express in dB, got {ratio}"
        )));
    }
    Ok(10.0 * ratio.log10())
}

pub fn db_to_ratio(db: f64) -> Result<f64> {
    if !db.is_finite() {
        return Err(Error::invalid(format!("dB value must be finite, got {db}")));
    }
    Ok(10f64.powf(db / 10.0))
}

/// Converts `value` between units of the same kind (absolute power or ratio).
pub fn convert_power(value: f64, from: PowerUnit, to: PowerUnit) -> Result<f64> {
    use PowerUnit::*;
    if from.is_absolute() != to.is_absolute() {
        return Err(Error::invalid(format!(
            "cannot convert between {from:?} and {to:?}"
        )));
    }
    match (from, to) {
        (Watts, Dbm) => watts_to_dbm(value),
        (Dbm, Watts) => dbm_to_watts(value),
        (Linear, Db) => ratio_to_db(value),
        (Db, Linear) => db_to_ratio(value),
        _ if value.is_finite() => Ok(value),
        _ => Err(Error::invalid(format!("value must be finite, got {value}"))),
    }
}

/// Thermal noise power k·T·B at 290 K for a bandwidth in hertz.
pub fn thermal_noise_watts(bandwidth_hz: f64) -> Result<f64> {
    if !(bandwidth_hz.is_finite() && bandwidth_hz > 0.0) {
        return Err(Error::invalid(format!(
            "bandwidth must be positive, got {bandwidth_hz} Hz"
        )));
    }
    Ok(BOLTZMANN * REFERENCE_TEMPERATURE_K * bandwidth_hz)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn dbm_examples() {
        assert_eq!(
            convert_power(1.0, PowerUnit::Watts, PowerUnit::Dbm).unwrap(),
            30.0
        );
        assert_eq!(
            convert_power(1e-3, PowerUnit::Watts, PowerUnit::Dbm).unwrap(),
            0.0
        );
        let w = convert_power(-41.0, PowerUnit::Dbm, PowerUnit::Watts).unwrap();
        assert!(rel(w, 7.943282347242822e-8) < 1e-12);
    }

    #[test]
    fn nonpositive_watts_rejected() {
        assert!(matches!(watts_to_dbm(0.0), Err(Error::InvalidInput(_))));
        assert!(watts_to_dbm(-1.0).is_err());
        assert!(ratio_to_db(0.0).is_err());
    }

    #[test]
    fn mixed_kinds_rejected() {
        assert!(convert_power(1.0, PowerUnit::Watts, PowerUnit::Db).is_err());
        assert!(convert_power(1.0, PowerUnit::Linear, PowerUnit::Dbm).is_err());
        assert_eq!(
            convert_power(2.5, PowerUnit::Db, PowerUnit::Db).unwrap(),
            2.5
        );
    }

    #[test]
    fn ratio_db() {
        assert!((ratio_to_db(2.0).unwrap() - 3.010299956639812).abs() < 1e-12);
        assert!(rel(db_to_ratio(10.0).unwrap(), 10.0) < 1e-15);
    }

    #[test]
    fn thermal_noise_at_one_hertz() {
        let n = thermal_noise_watts(1.0).unwrap();
        assert!(rel(n, 1.380649e-23 * 290.0) < 1e-15);
        // about -174 dBm/Hz
        assert!((watts_to_dbm(n).unwrap() + 173.975).abs() < 1e-3);
        assert!(thermal_noise_watts(0.0).is_err());
    }
}
