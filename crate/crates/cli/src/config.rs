//! Run configuration: an optional TOML file merged with command-line flags.
//! Flags win over the file.
//!
//! ```toml
//! [scenario]
//! label = "e0g1"        # or "custom" with [scenario.initial1] / [scenario.initial2]
//! model = "rabi"
//! n_fock = 10
//! coupling = 0.2
//! omega1 = 1.0
//! omega2 = 0.95
//! convention = "half"
//! eps_bsm = 1e-9
//!
//! [grid]
//! start = 0.0
//! stop = 100.0
//! step = 0.05
//!
//! [detuning]
//! omega2 = [1.0, 0.95, 0.8]
//!
//! [output]
//! path = "e0g1.csv"
//! format = "csv"
//! plot_script = false
//! ```

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use fluxswap::{
    build_scenario, InitialState, Model, Overrides, QubitConvention, Scenario, ScenarioLabel,
    SubsystemParams, TimeGrid, C64,
};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub detuning: DetuningSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub label: Option<String>,
    pub model: Option<String>,
    pub n_fock: Option<usize>,
    pub coupling: Option<f64>,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    pub convention: Option<String>,
    pub eps_bsm: Option<f64>,
    pub initial1: Option<InitialSection>,
    pub initial2: Option<InitialSection>,
}

/// Inline initial state: complex numbers as `[re, im]` pairs.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    /// Weights of (ground, excited).
    pub qubit: [[f64; 2]; 2],
    pub photons: Vec<[f64; 2]>,
}

impl InitialSection {
    fn to_initial(&self) -> InitialState {
        let c = |z: &[f64; 2]| C64::new(z[0], z[1]);
        InitialState {
            qubit: [c(&self.qubit[0]), c(&self.qubit[1])],
            photons: self.photons.iter().map(c).collect(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub step: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetuningSection {
    #[serde(default)]
    pub omega2: Vec<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub plot_script: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config file {}", path.display()))
    }
}

/// Scenario-selection flags shared by `run`, `scan` and `check-truncation`.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioFlags {
    /// Structured-text (TOML) config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Scenario label: e0g1, e01g01, e0123g0123, e0e0, e01e01, e0123e0123.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Coupling model: rabi or jc.
    #[arg(long)]
    pub model: Option<String>,
    /// Number of retained Fock levels.
    #[arg(long)]
    pub n_fock: Option<usize>,
    /// Qubit-cavity coupling g (both subsystems).
    #[arg(long)]
    pub coupling: Option<f64>,
    /// Sets ω₁ = Ω₁.
    #[arg(long)]
    pub omega1: Option<f64>,
    /// Sets ω₂ = Ω₂.
    #[arg(long)]
    pub omega2: Option<f64>,
    /// Qubit energy convention: half (Ω/2 σz) or full (Ω σz).
    #[arg(long)]
    pub convention: Option<String>,
    /// First measurement time t'.
    #[arg(long)]
    pub t_start: Option<f64>,
    /// Last measurement time t' (inclusive).
    #[arg(long)]
    pub t_stop: Option<f64>,
    /// Spacing of the t' grid.
    #[arg(long)]
    pub t_step: Option<f64>,
    /// Success probability below which concurrence is undefined.
    #[arg(long)]
    pub eps_bsm: Option<f64>,
}

/// Output flags of `run` and `scan`.
#[derive(Debug, Clone, Default, Args)]
pub struct OutputFlags {
    /// Output file (`run`) or directory (`scan`).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Also write a gnuplot script next to the data.
    #[arg(long)]
    pub plot_script: bool,
}

/// Fully merged configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub detunings: Vec<f64>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub plot_script: bool,
}

impl RunConfig {
    pub fn resolve(flags: &ScenarioFlags, out: &OutputFlags, detunings: &[f64]) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let sc = &file.scenario;

        let label = flags
            .scenario
            .clone()
            .or_else(|| sc.label.clone())
            .context("no scenario given (use --scenario or [scenario] label)")?;
        let model = flags
            .model
            .as_deref()
            .or(sc.model.as_deref())
            .map(str::parse::<Model>)
            .transpose()?;
        let convention = flags
            .convention
            .as_deref()
            .or(sc.convention.as_deref())
            .map(str::parse::<QubitConvention>)
            .transpose()?;

        let base_grid = TimeGrid::default();
        let grid = TimeGrid::new(
            flags.t_start.or(file.grid.start).unwrap_or(base_grid.start),
            flags.t_stop.or(file.grid.stop).unwrap_or(base_grid.stop),
            flags.t_step.or(file.grid.step).unwrap_or(base_grid.step),
        )?;

        let overrides = Overrides {
            model,
            n_fock: flags.n_fock.or(sc.n_fock),
            coupling: flags.coupling.or(sc.coupling),
            omega1: flags.omega1.or(sc.omega1),
            omega2: flags.omega2.or(sc.omega2),
            convention,
            grid: Some(grid),
            eps_bsm: flags.eps_bsm.or(sc.eps_bsm),
        };

        let scenario = if label.parse::<ScenarioLabel>()? == ScenarioLabel::Custom {
            let (Some(i1), Some(i2)) = (&sc.initial1, &sc.initial2) else {
                bail!("a custom scenario needs [scenario.initial1] and [scenario.initial2] in the config file");
            };
            let params = SubsystemParams::default();
            let mut s = Scenario::custom(params, params, i1.to_initial(), i2.to_initial(), grid)?;
            s.apply(&overrides);
            s.validate()?;
            s
        } else {
            build_scenario(&label, &overrides)?
        };

        let detunings = if detunings.is_empty() {
            file.detuning.omega2.clone()
        } else {
            detunings.to_vec()
        };
        for &w in &detunings {
            if !(w.is_finite() && w > 0.0) {
                bail!("detuning values must be positive, got {w}");
            }
        }

        Ok(Self {
            scenario,
            detunings,
            output: out.output.clone().or(file.output.path),
            format: out.format.or(file.output.format).unwrap_or_default(),
            plot_script: out.plot_script || file.output.plot_script.unwrap_or(false),
        })
    }
}
