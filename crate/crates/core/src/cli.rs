//! Command-line front end: `sweep`, `presets` and `validate`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::channel::{ConventionalModel, FadingModel};
use crate::config::{parse_scenario, RunPlan};
use crate::error::{Error, Result};
use crate::output::{emit_results, OutputFormat};
use crate::presets;
use crate::sweep::Execution;

#[derive(Debug, Parser)]
#[command(
    name = "irslink",
    version,
    about = "Small-cell and IRS-assisted downlink SINR sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a preset or configuration file and write the results.
    Sweep(SweepArgs),
    /// List the built-in experiments.
    Presets {
        /// Print the configuration document behind one preset.
        #[arg(long, value_name = "NAME")]
        show: Option<String>,
    },
    /// Parse a configuration file and report diagnostics without running it.
    Validate { path: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Paper,
    Friis,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FadingArg {
    Deterministic,
    Rayleigh,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Built-in experiment name (see `presets`).
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// Scenario configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte-Carlo trials per grid point.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, value_enum)]
    conventional_model: Option<ModelArg>,
    /// Override the fading mode of the scenario.
    #[arg(long, value_enum)]
    fading: Option<FadingArg>,
    /// Evaluate grid points on the calling thread only.
    #[arg(long)]
    serial: bool,
    /// Record the wall-clock time in JSON metadata. Output is then no longer
    /// reproducible byte for byte.
    #[arg(long)]
    timestamp: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Preset(String),
    File(PathBuf),
}

/// A fully resolved `sweep` invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub conventional_model: Option<ConventionalModel>,
    pub rayleigh: Option<bool>,
    pub execution: Execution,
    pub timestamp: bool,
}

impl RunConfig {
    fn from_args(a: SweepArgs) -> Self {
        let source = match (a.preset, a.config) {
            (Some(p), _) => Source::Preset(p),
            (None, Some(c)) => Source::File(c),
            (None, None) => unreachable!("clap requires --preset or --config"),
        };
        RunConfig {
            source,
            seed: a.seed,
            trials: a.trials,
            out: a.out,
            format: a.format,
            conventional_model: a.conventional_model.map(|m| match m {
                ModelArg::Paper => ConventionalModel::Paper,
                ModelArg::Friis => ConventionalModel::Friis,
            }),
            rayleigh: a.fading.map(|f| matches!(f, FadingArg::Rayleigh)),
            execution: if a.serial {
                Execution::Serial
            } else {
                Execution::Parallel
            },
            timestamp: a.timestamp,
        }
    }

    /// Loads the scenario and applies command-line overrides.
    pub fn plan(&self) -> Result<RunPlan> {
        let mut plan = match &self.source {
            Source::Preset(name) => presets::preset(name)?,
            Source::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                parse_scenario(&text)?
            }
        };
        if let Some(seed) = self.seed {
            plan.spec = plan.spec.with_seed(seed);
        }
        if let Some(trials) = self.trials {
            plan.spec = plan
                .spec
                .with_trials(trials)
                .map_err(|_| Error::invalid("--trials must be at least 1"))?;
        }
        if let Some(m) = self.conventional_model {
            plan.scenario.conventional_model = m;
        }
        match self.rayleigh {
            Some(true) => plan.scenario.fading = FadingModel::RayleighExponential { seed: 0 },
            Some(false) => plan.scenario.fading = FadingModel::Deterministic,
            None => {}
        }
        plan.scenario.fading = plan.scenario.fading.with_seed(plan.spec.seed);
        Ok(plan)
    }

    pub fn execute(&self, stdout: &mut dyn Write) -> Result<()> {
        let plan = self.plan()?;
        let mut results = plan.run(self.execution)?;
        if self.timestamp {
            let now = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            for r in &mut results {
                r.metadata.timestamp = Some(now);
            }
        }
        match &self.out {
            Some(path) => {
                let file = File::create(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                let mut w = BufWriter::new(file);
                emit_results(&results, self.format, &mut w)
            }
            None => emit_results(&results, self.format, stdout),
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) | Error::Field { .. } => "invalid_input",
        Error::DegenerateGeometry(_) => "degenerate_geometry",
        Error::Config { .. } => "config",
        Error::Io(_) => "io",
    }
}

/// One-line diagnostic: `irslink: error: <kind>: <detail>`.
pub fn error_line(e: &Error) -> String {
    let detail = match e {
        Error::Config { key, message } => format!("{key}: {message}"),
        Error::InvalidInput(m) | Error::DegenerateGeometry(m) | Error::Io(m) => m.clone(),
        Error::Field { message, .. } => message.clone(),
    };
    format!(
        "irslink: error: {}: {}",
        error_kind(e),
        detail.replace(['\n', '\r'], " ")
    )
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Sweep(args) => RunConfig::from_args(args).execute(stdout),
        Command::Presets { show: None } => list_presets(stdout),
        Command::Presets { show: Some(name) } => presets::preset_config(&name)
            .and_then(|text| stdout.write_all(text.as_bytes()).map_err(Error::from)),
        Command::Validate { path } => validate(&path, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", error_line(&e));
            1
        }
    }
}

fn list_presets(out: &mut dyn Write) -> Result<()> {
    for name in presets::NAMES {
        writeln!(out, "{name}\t{}", presets::describe(name).unwrap_or(""))?;
    }
    Ok(())
}

fn validate(path: &std::path::Path, out: &mut dyn Write) -> Result<()> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let plan = parse_scenario(&text)?;
    writeln!(
        out,
        "ok: {} ({}, {}, {} points, {} trials)",
        plan.scenario.label,
        plan.scenario.link.mode_name(),
        plan.spec.variable.name(),
        plan.points(),
        plan.spec.trials
    )?;
    Ok(())
}
