//! Scenario definitions and the sweep / Monte-Carlo engine.
//!
//! Fading draws for grid point `i`, trial `t` always use stream index
//! `i * trials + t`, so every result is a pure function of the inputs no
//! matter how points are scheduled. Points run on the rayon pool unless
//! [`Execution::Serial`] is requested.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{
    irs_rx_power, units::watts_to_dbm, ChannelParams, ConventionalModel, FadingLane, FadingModel,
    FadingStream, IrsPanel,
};
use crate::error::{Error, Result};
use crate::geometry::{cascade_distances, distance, Direction, Point3};
use crate::sinr::{aggregate_interference_with, sinr, InterfererSet};

#[derive(Debug, Clone, PartialEq)]
pub enum Link {
    Conventional,
    IrsAssisted { panel: IrsPanel, irs: Point3 },
}

impl Link {
    pub fn mode_name(&self) -> &'static str {
        match self {
            Link::Conventional => "conventional",
            Link::IrsAssisted { .. } => "irs",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub channel: ChannelParams,
    pub fading: FadingModel,
    pub interference: InterfererSet,
    pub link: Link,
    pub tx: Point3,
    /// Ray along which receivers are placed during distance sweeps, from the
    /// transmitter (conventional) or from the IRS (IRS-assisted).
    pub rx_direction: Direction,
    pub conventional_model: ConventionalModel,
    /// Free-text modelling assumptions copied into result metadata.
    pub assumptions: Vec<String>,
}

impl Scenario {
    /// Received power at `rx` before fading, in watts.
    pub fn mean_rx_power(&self, rx: Point3) -> Result<f64> {
        match &self.link {
            Link::Conventional => {
                self.conventional_model
                    .rx_power(&self.channel, distance(self.tx, rx), 1.0)
            }
            Link::IrsAssisted { panel, irs } => {
                let geom = cascade_distances(self.tx, *irs, rx)?;
                irs_rx_power(&self.channel, panel, &geom)
            }
        }
    }

    /// Receiver position for a distance-sweep abscissa.
    pub fn receiver_at(&self, x: f64) -> Result<Point3> {
        let origin = match &self.link {
            Link::Conventional => self.tx,
            Link::IrsAssisted { irs, .. } => *irs,
        };
        origin.advance(self.rx_direction, x)
    }

    fn faded_rx_power(&self, rx: Point3, fading: f64) -> Result<f64> {
        match &self.link {
            Link::Conventional => {
                self.conventional_model
                    .rx_power(&self.channel, distance(self.tx, rx), fading)
            }
            Link::IrsAssisted { .. } => Ok(self.mean_rx_power(rx)? * fading),
        }
    }

    fn with_panel(&self, panel: IrsPanel) -> Result<Scenario> {
        match &self.link {
            Link::IrsAssisted { irs, .. } => Ok(Scenario {
                link: Link::IrsAssisted { panel, irs: *irs },
                ..self.clone()
            }),
            Link::Conventional => Err(Error::invalid(
                "angle sweeps require an IRS-assisted scenario",
            )),
        }
    }

    fn with_irs(&self, irs: Point3) -> Result<Scenario> {
        match &self.link {
            Link::IrsAssisted { panel, .. } => Ok(Scenario {
                link: Link::IrsAssisted { panel: *panel, irs },
                ..self.clone()
            }),
            Link::Conventional => Err(Error::invalid(
                "placement comparison requires an IRS-assisted scenario",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    RxDistance,
    AnglePair,
    IrsPosition,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::RxDistance => "rx_distance",
            SweepVariable::AnglePair => "angle_pair",
            SweepVariable::IrsPosition => "irs_position",
        }
    }
}

/// A uniform grid with Monte-Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    start: f64,
    stop: f64,
    steps: usize,
    pub trials: u64,
    pub seed: u64,
}

impl SweepSpec {
    pub fn new(
        variable: SweepVariable,
        start: f64,
        stop: f64,
        steps: usize,
        trials: u64,
        seed: u64,
    ) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite()) || start >= stop {
            return Err(Error::field(
                "start",
                format!("start must be less than stop, got start={start}, stop={stop}"),
            ));
        }
        if steps < 2 {
            return Err(Error::field(
                "steps",
                format!("steps must be at least 2, got {steps}"),
            ));
        }
        if trials < 1 {
            return Err(Error::field("trials", "trials must be at least 1"));
        }
        Ok(SweepSpec {
            variable,
            start,
            stop,
            steps,
            trials,
            seed,
        })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn with_trials(self, trials: u64) -> Result<Self> {
        Self::new(
            self.variable,
            self.start,
            self.stop,
            self.steps,
            trials,
            self.seed,
        )
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SweepSpec { seed, ..self }
    }

    pub fn with_variable(self, variable: SweepVariable) -> Self {
        SweepSpec { variable, ..self }
    }

    /// `start + i·(stop − start)/(steps − 1)` for `i` in `0..steps`.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let denom = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.start + i as f64 * span / denom)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 4]", from = "[f64; 4]")]
pub struct SweepRow {
    pub x: f64,
    pub rx_power_dbm: f64,
    pub sinr_db: f64,
    pub sinr_db_stddev: f64,
}

impl From<SweepRow> for [f64; 4] {
    fn from(r: SweepRow) -> Self {
        [r.x, r.rx_power_dbm, r.sinr_db, r.sinr_db_stddev]
    }
}

impl From<[f64; 4]> for SweepRow {
    fn from(a: [f64; 4]) -> Self {
        SweepRow {
            x: a[0],
            rx_power_dbm: a[1],
            sinr_db: a[2],
            sinr_db_stddev: a[3],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub seed: u64,
    pub trials: u64,
    pub mode: String,
    pub conventional_model: String,
    pub fading: String,
    pub interference: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta_r: Option<f64>,
    pub x_axis: String,
    pub assumptions: Vec<String>,
    /// Unix seconds; absent unless the caller stamps the result.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    #[serde(rename = "label")]
    pub scenario_label: String,
    #[serde(rename = "variable")]
    pub variable_name: String,
    pub metadata: Metadata,
    pub rows: Vec<SweepRow>,
}

/// Summary of the fading trials at one receiver position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointStats {
    pub mean_rx_power_w: f64,
    pub mean_rx_power_dbm: f64,
    pub mean_sinr_db: f64,
    pub sinr_db_stddev: f64,
}

fn metadata(scenario: &Scenario, spec: &SweepSpec, x_axis: &str) -> Metadata {
    let (theta_t, theta_r) = match &scenario.link {
        Link::IrsAssisted { panel, .. } => (Some(panel.theta_t()), Some(panel.theta_r())),
        Link::Conventional => (None, None),
    };
    Metadata {
        seed: spec.seed,
        trials: spec.trials,
        mode: scenario.link.mode_name().into(),
        conventional_model: scenario.conventional_model.name().into(),
        fading: scenario.fading.name().into(),
        interference: scenario.interference.mode_name().into(),
        theta_t,
        theta_r,
        x_axis: x_axis.into(),
        assumptions: scenario.assumptions.clone(),
        timestamp: None,
    }
}

/// Runs the fading trials for one receiver position and calls `sink` with
/// `(rx_power_w, sinr_db)` per trial. Deterministic fading collapses to a
/// single evaluation.
fn for_each_trial(
    scenario: &Scenario,
    fading: FadingModel,
    rx: Point3,
    trials: u64,
    first_index: u64,
    mut sink: impl FnMut(f64, f64),
) -> Result<()> {
    let trials = if fading.is_deterministic() { 1 } else { trials };
    let base = scenario.mean_rx_power(rx)?;
    let per_eval = scenario.interference.draws_per_evaluation();
    let mut draws = FadingStream::new(fading, FadingLane::Signal, first_index);
    for t in 0..trials {
        let l = draws.next_factor();
        let p = match scenario.link {
            Link::Conventional => scenario.faded_rx_power(rx, l)?,
            Link::IrsAssisted { .. } => base * l,
        };
        let intf = aggregate_interference_with(
            scenario.conventional_model,
            &scenario.interference,
            rx,
            fading,
            (first_index + t) * per_eval,
        )?;
        let budget = sinr(p, intf, scenario.channel.noise_power())?;
        sink(p, budget.sinr_db);
    }
    Ok(())
}

fn point_stats(
    scenario: &Scenario,
    fading: FadingModel,
    rx: Point3,
    trials: u64,
    first_index: u64,
) -> Result<PointStats> {
    let mut n = 0u64;
    let mut sum_w = 0.0;
    let mut sum_dbm = 0.0;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut dbm_err = None;
    for_each_trial(scenario, fading, rx, trials, first_index, |p, s| {
        n += 1;
        sum_w += p;
        match watts_to_dbm(p) {
            Ok(v) => sum_dbm += v,
            Err(e) => dbm_err = Some(e),
        }
        let delta = s - mean;
        mean += delta / n as f64;
        m2 += delta * (s - mean);
    })?;
    if let Some(e) = dbm_err {
        return Err(e);
    }
    let nf = n as f64;
    Ok(PointStats {
        mean_rx_power_w: sum_w / nf,
        mean_rx_power_dbm: sum_dbm / nf,
        mean_sinr_db: mean,
        sinr_db_stddev: if n > 1 { (m2 / nf).sqrt() } else { 0.0 },
    })
}

fn map_points<T: Send>(
    n: usize,
    exec: Execution,
    f: impl Fn(usize) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    match exec {
        Execution::Serial => (0..n).map(f).collect(),
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

/// SINR vs. receiver distance on the default thread pool.
pub fn run_distance_sweep(scenario: &Scenario, spec: &SweepSpec) -> Result<SweepResult> {
    run_distance_sweep_with(scenario, spec, Execution::Parallel)
}

/// Conventional scenarios place the receiver `x` meters from the transmitter
/// along `rx_direction`. IRS-assisted scenarios place it `x` meters from the
/// IRS along the same ray, so `x` is `r2` and `r1` stays fixed.
pub fn run_distance_sweep_with(
    scenario: &Scenario,
    spec: &SweepSpec,
    exec: Execution,
) -> Result<SweepResult> {
    if spec.variable != SweepVariable::RxDistance && spec.variable != SweepVariable::AnglePair {
        return Err(Error::invalid(format!(
            "distance sweep needs an rx_distance grid, got {}",
            spec.variable.name()
        )));
    }
    if spec.start <= 0.0 {
        return Err(Error::field(
            "start",
            format!("distance grid must be positive, got start={}", spec.start),
        ));
    }
    let grid = spec.grid();
    let fading = scenario.fading.with_seed(spec.seed);
    let rows = map_points(grid.len(), exec, |i| {
        let x = grid[i];
        let stats = scenario
            .receiver_at(x)
            .and_then(|rx| point_stats(scenario, fading, rx, spec.trials, i as u64 * spec.trials))
            .map_err(|e| at_point(e, x))?;
        Ok(SweepRow {
            x,
            rx_power_dbm: stats.mean_rx_power_dbm,
            sinr_db: stats.mean_sinr_db,
            sinr_db_stddev: stats.sinr_db_stddev,
        })
    })?;
    let x_axis = match scenario.link {
        Link::Conventional => "transmitter-receiver distance along rx_direction (m)",
        Link::IrsAssisted { .. } => {
            "IRS-receiver distance r2 along rx_direction from the IRS (m); r1 and angles fixed"
        }
    };
    Ok(SweepResult {
        scenario_label: scenario.label.clone(),
        variable_name: SweepVariable::RxDistance.name().into(),
        metadata: metadata(scenario, spec, x_axis),
        rows,
    })
}

fn at_point(e: Error, x: f64) -> Error {
    match e {
        Error::DegenerateGeometry(m) => Error::DegenerateGeometry(format!("at x = {x}: {m}")),
        Error::InvalidInput(m) => Error::InvalidInput(format!("at x = {x}: {m}")),
        other => other,
    }
}

pub fn run_angle_sweep(
    scenario: &Scenario,
    angle_pairs: &[(f64, f64)],
    spec: &SweepSpec,
) -> Result<Vec<SweepResult>> {
    run_angle_sweep_with(scenario, angle_pairs, spec, Execution::Parallel)
}

/// One distance sweep per `(theta_t, theta_r)` pair. All pairs share the
/// seed, so fading draws are common random numbers across the family.
pub fn run_angle_sweep_with(
    scenario: &Scenario,
    angle_pairs: &[(f64, f64)],
    spec: &SweepSpec,
    exec: Execution,
) -> Result<Vec<SweepResult>> {
    let Link::IrsAssisted { panel, .. } = &scenario.link else {
        return Err(Error::invalid(
            "angle sweeps require an IRS-assisted scenario",
        ));
    };
    if angle_pairs.is_empty() {
        return Err(Error::field("angle_pairs", "angle_pairs must not be empty"));
    }
    let spec = spec.with_variable(SweepVariable::RxDistance);
    angle_pairs
        .iter()
        .map(|&(t, r)| {
            let mut s = scenario.with_panel(panel.with_angles(t, r)?)?;
            s.label = format!("{}-t{}-r{}", scenario.label, t, r);
            let mut res = run_distance_sweep_with(&s, &spec, exec)?;
            res.variable_name = SweepVariable::AnglePair.name().into();
            Ok(res)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReceiverSinr {
    pub rx: Point3,
    pub stats: PointStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlacementEntry {
    pub irs: Point3,
    /// Position of this candidate in the caller's input list.
    pub input_index: usize,
    pub receivers: Vec<ReceiverSinr>,
    pub min_sinr_db: f64,
    pub mean_sinr_db: f64,
    pub max_sinr_db: f64,
}

/// Candidates sorted by minimum SINR, best first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlacementReport {
    pub entries: Vec<PlacementEntry>,
}

pub fn compare_placement(
    scenario: &Scenario,
    irs_positions: &[Point3],
    rx_positions: &[Point3],
    spec: &SweepSpec,
) -> Result<PlacementReport> {
    compare_placement_with(
        scenario,
        irs_positions,
        rx_positions,
        spec,
        Execution::Parallel,
    )
}

/// Evaluates every (IRS candidate, receiver) pair. Receiver `j` uses stream
/// indices `j * trials ..`, shared by all candidates.
pub fn compare_placement_with(
    scenario: &Scenario,
    irs_positions: &[Point3],
    rx_positions: &[Point3],
    spec: &SweepSpec,
    exec: Execution,
) -> Result<PlacementReport> {
    if !matches!(scenario.link, Link::IrsAssisted { .. }) {
        return Err(Error::invalid(
            "placement comparison requires an IRS-assisted scenario",
        ));
    }
    if irs_positions.is_empty() || rx_positions.is_empty() {
        return Err(Error::invalid(
            "placement comparison needs at least one IRS position and one receiver",
        ));
    }
    let fading = scenario.fading.with_seed(spec.seed);
    let mut entries = map_points(irs_positions.len(), exec, |k| {
        let irs = irs_positions[k];
        let s = scenario.with_irs(irs)?;
        let receivers = rx_positions
            .iter()
            .enumerate()
            .map(|(j, &rx)| {
                let stats = point_stats(&s, fading, rx, spec.trials, j as u64 * spec.trials)
                    .map_err(|e| match e {
                        Error::DegenerateGeometry(m) => Error::DegenerateGeometry(format!(
                            "IRS at {irs}, receiver at {rx}: {m}"
                        )),
                        other => other,
                    })?;
                Ok(ReceiverSinr { rx, stats })
            })
            .collect::<Result<Vec<_>>>()?;
        let sinrs = receivers.iter().map(|r| r.stats.mean_sinr_db);
        let min = sinrs.clone().fold(f64::INFINITY, f64::min);
        let max = sinrs.clone().fold(f64::NEG_INFINITY, f64::max);
        let mean = sinrs.sum::<f64>() / receivers.len() as f64;
        Ok(PlacementEntry {
            irs,
            input_index: k,
            receivers,
            min_sinr_db: min,
            mean_sinr_db: mean,
            max_sinr_db: max,
        })
    })?;
    entries.sort_by(|a, b| b.min_sinr_db.total_cmp(&a.min_sinr_db));
    Ok(PlacementReport { entries })
}

/// IRS candidates at `scenario.irs + x·axis` over the grid, summarised per
/// candidate as a sweep row: mean received power and mean SINR over the
/// receivers, and the mean per-receiver fading spread.
pub fn run_placement_sweep_with(
    scenario: &Scenario,
    axis: Direction,
    receivers: &[Point3],
    spec: &SweepSpec,
    exec: Execution,
) -> Result<SweepResult> {
    let Link::IrsAssisted { irs, .. } = &scenario.link else {
        return Err(Error::invalid(
            "placement comparison requires an IRS-assisted scenario",
        ));
    };
    let grid = spec.grid();
    let candidates = grid
        .iter()
        .map(|&x| irs.advance(axis, x))
        .collect::<Result<Vec<_>>>()?;
    let report = compare_placement_with(scenario, &candidates, receivers, spec, exec)?;
    let mut entries = report.entries;
    entries.sort_by_key(|e| e.input_index);
    let n = receivers.len() as f64;
    let rows = entries
        .iter()
        .map(|e| SweepRow {
            x: grid[e.input_index],
            rx_power_dbm: e
                .receivers
                .iter()
                .map(|r| r.stats.mean_rx_power_dbm)
                .sum::<f64>()
                / n,
            sinr_db: e.mean_sinr_db,
            sinr_db_stddev: e
                .receivers
                .iter()
                .map(|r| r.stats.sinr_db_stddev)
                .sum::<f64>()
                / n,
        })
        .collect();
    Ok(SweepResult {
        scenario_label: scenario.label.clone(),
        variable_name: SweepVariable::IrsPosition.name().into(),
        metadata: metadata(
            scenario,
            spec,
            "IRS offset along irs_axis from the configured IRS position (m); \
             sinr_db is the mean over receivers",
        ),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloStats {
    pub trials: u64,
    pub mean_rx_power_w: f64,
    pub mean_sinr_db: f64,
    pub sinr_db_stddev: f64,
    pub p5_sinr_db: f64,
    pub p95_sinr_db: f64,
}

/// Fading statistics at one receiver position over stream indices
/// `0..trials`.
pub fn monte_carlo_stats(
    scenario: &Scenario,
    point: Point3,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloStats> {
    if trials < 1 {
        return Err(Error::field("trials", "trials must be at least 1"));
    }
    let fading = scenario.fading.with_seed(seed);
    let mut rx_sum = 0.0;
    let mut samples = Vec::with_capacity(if fading.is_deterministic() {
        1
    } else {
        trials as usize
    });
    for_each_trial(scenario, fading, point, trials, 0, |p, s| {
        rx_sum += p;
        samples.push(s);
    })?;
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
    samples.sort_by(f64::total_cmp);
    Ok(MonteCarloStats {
        trials,
        mean_rx_power_w: rx_sum / n,
        mean_sinr_db: mean,
        sinr_db_stddev: var.sqrt(),
        p5_sinr_db: percentile(&samples, 0.05),
        p95_sinr_db: percentile(&samples, 0.95),
    })
}

/// Linear interpolation between closest ranks of a sorted sample.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}
