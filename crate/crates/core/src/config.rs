//! Scenario configuration documents.
//!
//! A configuration is a flat, sectioned TOML document. Powers are given in
//! dBm and antenna gains in dBi; both are converted to watts / linear gain
//! here and nowhere else. Every diagnostic names the offending
//! `section.key`.
//!
//! ```toml
//! [scenario]
//! label = "street"
//! mode = "irs"                    # or "conventional"
//! conventional_model = "paper"    # or "friis"
//!
//! [channel]
//! frequency_hz = 3.5e9
//! tx_power_dbm = 30
//! path_loss_exponent = 2
//! noise_dbm = -94                 # or noise_bandwidth_hz = 1e8
//!
//! [interference]
//! mode = "constant"               # or "modeled" with positions + tx_power_dbm
//! power_dbm = -85
//!
//! [panel]
//! element_length_m = 0.0428
//! element_width_m = 0.0428
//! tx_elements = 116
//! rx_elements = 116
//! reflection_coefficient = 0.9
//! tx_gain_dbi = 10
//! rx_gain_dbi = 10
//! theta_t = 60
//! theta_r = 60
//!
//! [geometry]
//! tx = [0, 0, 0]
//! irs = [100, 0, 0]
//! rx_direction = [0, 1, 0]
//!
//! [fading]
//! mode = "deterministic"          # or "rayleigh"
//!
//! [sweep]
//! variable = "rx_distance"        # or "angle_pair", "irs_position"
//! start = 5
//! stop = 100
//! steps = 20
//! trials = 1
//! seed = 0
//! ```

use std::collections::BTreeSet;

use toml::{Table, Value};

use crate::channel::units::{db_to_ratio, dbm_to_watts, thermal_noise_watts};
use crate::channel::{ChannelParams, ConventionalModel, FadingModel, IrsPanel, IrsPanelParams};
use crate::error::{Error, Result};
use crate::geometry::{Direction, Point3};
use crate::sinr::{Interferer, InterfererSet};
use crate::sweep::{
    run_angle_sweep_with, run_distance_sweep_with, run_placement_sweep_with, Execution, Link,
    Scenario, SweepResult, SweepSpec, SweepVariable,
};

/// What a configuration asks the engine to run.
#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    /// One distance sweep with the configured panel angles.
    Distance,
    /// One distance sweep per `(theta_t, theta_r)` pair.
    AnglePairs(Vec<(f64, f64)>),
    /// IRS moved along `axis` over the grid; SINR summarised over receivers.
    Placement {
        axis: Direction,
        receivers: Vec<Point3>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    pub scenario: Scenario,
    pub spec: SweepSpec,
    pub experiment: Experiment,
}

impl RunPlan {
    pub fn run(&self, exec: Execution) -> Result<Vec<SweepResult>> {
        match &self.experiment {
            Experiment::Distance => Ok(vec![run_distance_sweep_with(
                &self.scenario,
                &self.spec,
                exec,
            )?]),
            Experiment::AnglePairs(pairs) => {
                run_angle_sweep_with(&self.scenario, pairs, &self.spec, exec)
            }
            Experiment::Placement { axis, receivers } => Ok(vec![run_placement_sweep_with(
                &self.scenario,
                *axis,
                receivers,
                &self.spec,
                exec,
            )?]),
        }
    }

    /// Number of grid points per result.
    pub fn points(&self) -> usize {
        self.spec.steps()
    }
}

/// One `[section]` with key bookkeeping so unknown keys can be reported.
struct Section<'a> {
    name: &'static str,
    table: Option<&'a Table>,
    seen: BTreeSet<&'static str>,
}

impl<'a> Section<'a> {
    fn new(doc: &'a Table, name: &'static str) -> Result<Self> {
        let table = match doc.get(name) {
            None => None,
            Some(Value::Table(t)) => Some(t),
            Some(_) => return Err(Error::config(name, "expected a [section]")),
        };
        Ok(Section {
            name,
            table,
            seen: BTreeSet::new(),
        })
    }

    fn present(&self) -> bool {
        self.table.is_some()
    }

    fn key(&self, key: &str) -> String {
        format!("{}.{}", self.name, key)
    }

    fn err(&self, key: &str, message: impl Into<String>) -> Error {
        Error::config(self.key(key), message)
    }

    fn get(&mut self, key: &'static str) -> Option<&'a Value> {
        self.seen.insert(key);
        self.table.and_then(|t| t.get(key))
    }

    fn require<T>(&mut self, key: &'static str, v: Option<T>) -> Result<T> {
        v.ok_or_else(|| self.err(key, "missing required key"))
    }

    fn opt_f64(&mut self, key: &'static str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Float(f)) if f.is_finite() => Ok(Some(*f)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => Err(self.err(key, "expected a finite number")),
        }
    }

    fn f64(&mut self, key: &'static str) -> Result<f64> {
        let v = self.opt_f64(key)?;
        self.require(key, v)
    }

    fn opt_u64(&mut self, key: &'static str) -> Result<Option<u64>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
            Some(_) => Err(self.err(key, "expected a nonnegative integer")),
        }
    }

    fn u64(&mut self, key: &'static str) -> Result<u64> {
        let v = self.opt_u64(key)?;
        self.require(key, v)
    }

    fn opt_str(&mut self, key: &'static str) -> Result<Option<&'a str>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.as_str())),
            Some(_) => Err(self.err(key, "expected a string")),
        }
    }

    fn triple(&self, key: &str, v: &Value) -> Result<[f64; 3]> {
        let arr = match v {
            Value::Array(a) if a.len() == 3 => a,
            _ => return Err(self.err(key, "expected an array of 3 numbers [x, y, z]")),
        };
        let mut out = [0.0; 3];
        for (o, e) in out.iter_mut().zip(arr) {
            *o = match e {
                Value::Float(f) if f.is_finite() => *f,
                Value::Integer(i) => *i as f64,
                _ => return Err(self.err(key, "expected finite numbers")),
            };
        }
        Ok(out)
    }

    fn opt_point(&mut self, key: &'static str) -> Result<Option<Point3>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => {
                let t = self.triple(key, v)?;
                Point3::try_from(t)
                    .map(Some)
                    .map_err(|e| self.err(key, e.to_string()))
            }
        }
    }

    fn point(&mut self, key: &'static str) -> Result<Point3> {
        let v = self.opt_point(key)?;
        self.require(key, v)
    }

    fn opt_direction(&mut self, key: &'static str) -> Result<Option<Direction>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => {
                let t = self.triple(key, v)?;
                Direction::new(t)
                    .map(Some)
                    .map_err(|_| self.err(key, "direction vector must be nonzero"))
            }
        }
    }

    fn points(&mut self, key: &'static str) -> Result<Vec<Point3>> {
        let arr = match self.get(key) {
            None => return Err(self.err(key, "missing required key")),
            Some(Value::Array(a)) => a,
            Some(_) => return Err(self.err(key, "expected an array of [x, y, z] points")),
        };
        arr.iter()
            .map(|v| {
                let t = self.triple(key, v)?;
                Point3::try_from(t).map_err(|e| self.err(key, e.to_string()))
            })
            .collect()
    }

    fn strings(&mut self, key: &'static str) -> Result<Vec<String>> {
        match self.get(key) {
            None => Ok(vec![]),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    _ => Err(self.err(key, "expected an array of strings")),
                })
                .collect(),
            Some(_) => Err(self.err(key, "expected an array of strings")),
        }
    }

    fn finish(self) -> Result<()> {
        if let Some(t) = self.table {
            if let Some(k) = t.keys().find(|k| !self.seen.contains(k.as_str())) {
                return Err(self.err(k, "unknown key"));
            }
        }
        Ok(())
    }
}

/// Maps a field-level validation failure onto the config key it came from.
fn field_in(section: &str, keys: &[(&str, &str)], e: Error) -> Error {
    match e {
        Error::Field { field, message } => {
            let key = keys
                .iter()
                .find(|(f, _)| *f == field)
                .map(|(_, k)| *k)
                .unwrap_or(field);
            Error::config(format!("{section}.{key}"), message)
        }
        Error::InvalidInput(m) => Error::config(section, m),
        other => other,
    }
}

const SECTIONS: &[&str] = &[
    "scenario",
    "channel",
    "interference",
    "panel",
    "geometry",
    "fading",
    "sweep",
];

/// Parses and validates a configuration document.
pub fn parse_scenario(text: &str) -> Result<RunPlan> {
    let doc: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::config("document", e.message().to_string()))?;
    if let Some(k) = doc.keys().find(|k| !SECTIONS.contains(&k.as_str())) {
        return Err(Error::config(k.as_str(), "unknown section"));
    }

    let mut sc = Section::new(&doc, "scenario")?;
    let label = sc.opt_str("label")?.unwrap_or("scenario").to_string();
    let irs_mode = match sc.opt_str("mode")? {
        Some("conventional") => false,
        Some("irs") => true,
        Some(other) => {
            return Err(sc.err(
                "mode",
                format!("mode must be `conventional` or `irs`, got `{other}`"),
            ))
        }
        None => return Err(sc.err("mode", "missing required key")),
    };
    let conventional_model = match sc.opt_str("conventional_model")? {
        None => ConventionalModel::Paper,
        Some(s) => s
            .parse::<ConventionalModel>()
            .map_err(|e| field_in("scenario", &[], e))?,
    };
    let assumptions = sc.strings("assumptions")?;
    sc.finish()?;

    let channel = parse_channel(&doc)?;
    let interference = parse_interference(&doc, &channel)?;
    let channel = match &interference {
        InterfererSet::ConstantPower(w) => channel.with_interference_power(*w)?,
        InterfererSet::ModeledInterferers(_) => channel,
    };

    let mut geo = Section::new(&doc, "geometry")?;
    let tx = geo.point("tx")?;
    let irs = geo.opt_point("irs")?;
    let rx_direction = geo.opt_direction("rx_direction")?.unwrap_or(Direction::X);

    let panel_section = Section::new(&doc, "panel")?;
    let link = if irs_mode {
        if !panel_section.present() {
            return Err(Error::config(
                "panel",
                "missing [panel] section required when scenario.mode = \"irs\"",
            ));
        }
        let panel = parse_panel(panel_section)?;
        let irs = geo.require("irs", irs)?;
        Link::IrsAssisted { panel, irs }
    } else {
        if panel_section.present() {
            return Err(Error::config(
                "panel",
                "[panel] is only allowed when scenario.mode = \"irs\"",
            ));
        }
        if irs.is_some() {
            return Err(geo.err("irs", "only allowed when scenario.mode = \"irs\""));
        }
        Link::Conventional
    };
    geo.finish()?;

    let mut fd = Section::new(&doc, "fading")?;
    let fading = match fd.opt_str("mode")? {
        None | Some("deterministic") => FadingModel::Deterministic,
        Some("rayleigh") => FadingModel::RayleighExponential { seed: 0 },
        Some(other) => {
            return Err(fd.err(
                "mode",
                format!("mode must be `deterministic` or `rayleigh`, got `{other}`"),
            ))
        }
    };
    fd.finish()?;

    let (spec, experiment) = parse_sweep(&doc, irs_mode)?;
    let scenario = Scenario {
        label,
        channel,
        fading: fading.with_seed(spec.seed),
        interference,
        link,
        tx,
        rx_direction,
        conventional_model,
        assumptions,
    };
    Ok(RunPlan {
        scenario,
        spec,
        experiment,
    })
}

fn parse_channel(doc: &Table) -> Result<ChannelParams> {
    let mut s = Section::new(doc, "channel")?;
    if !s.present() {
        return Err(Error::config("channel", "missing [channel] section"));
    }
    let frequency = s.f64("frequency_hz")?;
    let tx_dbm = s.f64("tx_power_dbm")?;
    let alpha = s.f64("path_loss_exponent")?;
    let noise = match (s.opt_f64("noise_dbm")?, s.opt_f64("noise_bandwidth_hz")?) {
        (Some(dbm), None) => dbm_to_watts(dbm).map_err(|e| s.err("noise_dbm", e.to_string()))?,
        (None, Some(bw)) => thermal_noise_watts(bw).map_err(|_| {
            s.err(
                "noise_bandwidth_hz",
                format!("noise_bandwidth_hz must be positive, got {bw}"),
            )
        })?,
        (Some(_), Some(_)) => {
            return Err(s.err(
                "noise_dbm",
                "give exactly one of noise_dbm and noise_bandwidth_hz",
            ))
        }
        (None, None) => {
            return Err(s.err("noise_dbm", "missing required key (or noise_bandwidth_hz)"))
        }
    };
    s.finish()?;
    let tx_power = dbm_to_watts(tx_dbm)?;
    ChannelParams::new(frequency, tx_power, alpha, noise, 0.0).map_err(|e| {
        field_in(
            "channel",
            &[("tx_power", "tx_power_dbm"), ("noise", "noise_dbm")],
            e,
        )
    })
}

fn parse_interference(doc: &Table, channel: &ChannelParams) -> Result<InterfererSet> {
    let mut s = Section::new(doc, "interference")?;
    if !s.present() {
        return Ok(InterfererSet::ConstantPower(0.0));
    }
    let set = match s.opt_str("mode")? {
        None | Some("constant") => {
            let w = match s.opt_f64("power_dbm")? {
                Some(dbm) => dbm_to_watts(dbm)?,
                None => 0.0,
            };
            InterfererSet::constant(w)?
        }
        Some("modeled") => {
            let positions = s.points("positions")?;
            let dbm = s.f64("tx_power_dbm")?;
            let params = channel
                .with_tx_power(dbm_to_watts(dbm)?)
                .map_err(|e| field_in("interference", &[("tx_power", "tx_power_dbm")], e))?;
            InterfererSet::ModeledInterferers(
                positions
                    .into_iter()
                    .map(|position| Interferer { params, position })
                    .collect(),
            )
        }
        Some(other) => {
            return Err(s.err(
                "mode",
                format!("mode must be `constant` or `modeled`, got `{other}`"),
            ))
        }
    };
    s.finish()?;
    Ok(set)
}

fn parse_panel(mut s: Section<'_>) -> Result<IrsPanel> {
    let element_length = s.f64("element_length_m")?;
    let element_width = s.f64("element_width_m")?;
    let m = s.u64("tx_elements")?;
    let n = s.u64("rx_elements")?;
    let a = s.f64("reflection_coefficient")?;
    let gt = s.f64("tx_gain_dbi")?;
    let gr = s.f64("rx_gain_dbi")?;
    let theta_t = s.f64("theta_t")?;
    let theta_r = s.f64("theta_r")?;
    let count = |s: &Section<'_>, key: &str, v: u64| {
        u32::try_from(v).map_err(|_| s.err(key, format!("{key} is too large")))
    };
    let params = IrsPanelParams {
        element_length,
        element_width,
        tx_side_elements: count(&s, "tx_elements", m)?,
        rx_side_elements: count(&s, "rx_elements", n)?,
        reflection_coefficient: a,
        tx_gain: db_to_ratio(gt)?,
        rx_gain: db_to_ratio(gr)?,
        theta_t,
        theta_r,
    };
    s.finish()?;
    IrsPanel::new(params).map_err(|e| {
        field_in(
            "panel",
            &[
                ("element_length", "element_length_m"),
                ("element_width", "element_width_m"),
                ("tx_gain", "tx_gain_dbi"),
                ("rx_gain", "rx_gain_dbi"),
            ],
            e,
        )
    })
}

fn parse_sweep(doc: &Table, irs_mode: bool) -> Result<(SweepSpec, Experiment)> {
    let mut s = Section::new(doc, "sweep")?;
    if !s.present() {
        return Err(Error::config("sweep", "missing [sweep] section"));
    }
    let variable = match s.opt_str("variable")? {
        None | Some("rx_distance") => SweepVariable::RxDistance,
        Some("angle_pair") => SweepVariable::AnglePair,
        Some("irs_position") => SweepVariable::IrsPosition,
        Some(other) => {
            return Err(s.err(
                "variable",
                format!(
                    "variable must be `rx_distance`, `angle_pair` or `irs_position`, got `{other}`"
                ),
            ))
        }
    };
    let start = s.f64("start")?;
    let stop = s.f64("stop")?;
    let steps = s.u64("steps")?;
    let trials = s.opt_u64("trials")?.unwrap_or(1);
    let seed = s.opt_u64("seed")?.unwrap_or(0);
    if variable != SweepVariable::IrsPosition && start <= 0.0 {
        return Err(s.err(
            "start",
            format!("distance grid must be positive, got {start}"),
        ));
    }

    let experiment = match variable {
        SweepVariable::RxDistance => Experiment::Distance,
        SweepVariable::AnglePair => {
            if !irs_mode {
                return Err(s.err(
                    "variable",
                    "angle_pair sweeps require scenario.mode = \"irs\"",
                ));
            }
            let pairs = match s.get("angle_pairs") {
                Some(Value::Array(a)) if !a.is_empty() => a,
                Some(_) => {
                    return Err(s.err(
                        "angle_pairs",
                        "expected a nonempty array of [theta_t, theta_r]",
                    ))
                }
                None => return Err(s.err("angle_pairs", "missing required key")),
            };
            let mut out = Vec::with_capacity(pairs.len());
            for p in pairs {
                let pair = match p {
                    Value::Array(v) if v.len() == 2 => v,
                    _ => return Err(s.err("angle_pairs", "each entry must be [theta_t, theta_r]")),
                };
                let num = |v: &Value| match v {
                    Value::Float(f) => Some(*f),
                    Value::Integer(i) => Some(*i as f64),
                    _ => None,
                };
                let (Some(t), Some(r)) = (num(&pair[0]), num(&pair[1])) else {
                    return Err(s.err("angle_pairs", "angles must be numbers"));
                };
                for (name, a) in [("theta_t", t), ("theta_r", r)] {
                    if !(a.is_finite() && (0.0..90.0).contains(&a)) {
                        return Err(s.err(
                            "angle_pairs",
                            format!("{name} must lie in [0, 90), got {a}"),
                        ));
                    }
                }
                out.push((t, r));
            }
            Experiment::AnglePairs(out)
        }
        SweepVariable::IrsPosition => {
            if !irs_mode {
                return Err(s.err(
                    "variable",
                    "irs_position sweeps require scenario.mode = \"irs\"",
                ));
            }
            let receivers = s.points("receivers")?;
            if receivers.is_empty() {
                return Err(s.err("receivers", "at least one receiver is required"));
            }
            let axis = s.opt_direction("irs_axis")?.unwrap_or(Direction::X);
            Experiment::Placement { axis, receivers }
        }
    };
    let steps = usize::try_from(steps).map_err(|_| s.err("steps", "steps is too large"))?;
    let spec = SweepSpec::new(variable, start, stop, steps, trials, seed)
        .map_err(|e| field_in("sweep", &[], e))?;
    s.finish()?;
    Ok((spec, experiment))
}
