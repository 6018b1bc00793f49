//! Downlink link-budget and SINR simulation for conventional and
//! IRS-assisted small cells.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: points and the distances `r`, `r1`, `r2`
//! - [`channel`]: wavelength, received-power models, fading, unit conversion
//! - [`sinr`]: SINR and interference aggregation
//! - [`sweep`]: scenarios, distance / angle / placement sweeps, Monte-Carlo
//! - [`config`], [`presets`], [`output`], [`cli`]: the command-line front end

pub mod channel;
pub mod cli;
pub mod config;
pub mod error;
pub mod geometry;
pub mod output;
pub mod presets;
pub mod sinr;
pub mod sweep;

pub use channel::{
    conventional_rx_power, convert_power, irs_rx_power, irs_scattering_gain, sample_fading,
    wavelength, ChannelParams, ConventionalModel, FadingModel, IrsPanel, IrsPanelParams, PowerUnit,
    SPEED_OF_LIGHT,
};
pub use config::{parse_scenario, Experiment, RunPlan};
pub use error::{Error, Result};
pub use geometry::{cascade_distances, distance, CascadeGeometry, Direction, Point3};
pub use output::{emit_results, OutputFormat};
pub use sinr::{aggregate_interference, sinr, Interferer, InterfererSet, LinkBudget};
pub use sweep::{
    compare_placement, monte_carlo_stats, run_angle_sweep, run_distance_sweep, Execution, Link,
    MonteCarloStats, PlacementReport, Scenario, SweepResult, SweepRow, SweepSpec, SweepVariable,
};
