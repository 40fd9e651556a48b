//! Parameters of a single qubit-cavity subsystem.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of retained Fock levels (|0⟩ … |9⟩).
pub const DEFAULT_N_FOCK: usize = 10;

/// Default qubit-field coupling, in units of the first cavity frequency.
pub const DEFAULT_COUPLING: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Full σ_x (a + a†) coupling, no rotating-wave approximation.
    Rabi,
    /// Rotating-wave coupling σ⁺a + σ⁻a†.
    Jc,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Rabi => "rabi",
            Model::Jc => "jc",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rabi" => Ok(Model::Rabi),
            "jc" | "jaynes-cummings" => Ok(Model::Jc),
            other => Err(Error::InvalidParameter(format!(
                "unknown model `{other}`, expected `rabi` or `jc`"
            ))),
        }
    }
}

/// Prefactor of the bare qubit term.
///
/// `Half` gives H_Q = (Ω/2)σ_z, so the qubit splitting is Ω and ω = Ω is
/// resonance. `Full` gives H_Q = Ω σ_z (splitting 2Ω).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitConvention {
    #[default]
    Half,
    Full,
}

impl QubitConvention {
    pub fn prefactor(self) -> f64 {
        match self {
            QubitConvention::Half => 0.5,
            QubitConvention::Full => 1.0,
        }
    }
}

impl fmt::Display for QubitConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QubitConvention::Half => "half",
            QubitConvention::Full => "full",
        })
    }
}

impl FromStr for QubitConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "half" => Ok(QubitConvention::Half),
            "full" => Ok(QubitConvention::Full),
            other => Err(Error::InvalidParameter(format!(
                "unknown qubit convention `{other}`, expected `half` or `full`"
            ))),
        }
    }
}

/// One qubit-cavity pair. All frequencies are dimensionless (units of ω₁).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsystemParams {
    /// Cavity frequency ω.
    pub cavity_freq: f64,
    /// Qubit frequency Ω.
    pub qubit_freq: f64,
    /// Coupling constant g.
    pub coupling: f64,
    /// Number of retained Fock levels.
    pub n_fock: usize,
    pub model: Model,
    pub qubit_convention: QubitConvention,
}

impl Default for SubsystemParams {
    fn default() -> Self {
        Self::resonant(1.0, DEFAULT_COUPLING, Model::Rabi)
    }
}

impl SubsystemParams {
    pub fn new(
        cavity_freq: f64,
        qubit_freq: f64,
        coupling: f64,
        n_fock: usize,
        model: Model,
        qubit_convention: QubitConvention,
    ) -> Result<Self> {
        let p = Self {
            cavity_freq,
            qubit_freq,
            coupling,
            n_fock,
            model,
            qubit_convention,
        };
        p.validate()?;
        Ok(p)
    }

    /// ω = Ω = `freq`, default truncation and convention.
    pub fn resonant(freq: f64, coupling: f64, model: Model) -> Self {
        Self {
            cavity_freq: freq,
            qubit_freq: freq,
            coupling,
            n_fock: DEFAULT_N_FOCK,
            model,
            qubit_convention: QubitConvention::Half,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_fock < 2 {
            return Err(Error::InvalidDimension(self.n_fock));
        }
        if !(self.cavity_freq.is_finite() && self.cavity_freq > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cavity frequency must be positive, got {}",
                self.cavity_freq
            )));
        }
        if !(self.qubit_freq.is_finite() && self.qubit_freq > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "qubit frequency must be positive, got {}",
                self.qubit_freq
            )));
        }
        if !(self.coupling.is_finite() && self.coupling >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coupling must be non-negative, got {}",
                self.coupling
            )));
        }
        Ok(())
    }

    /// Hilbert-space dimension of the qubit ⊗ Fock product space.
    pub fn dim(&self) -> usize {
        2 * self.n_fock
    }

    pub fn with_n_fock(mut self, n_fock: usize) -> Self {
        self.n_fock = n_fock;
        self
    }

    pub fn with_model(mut self, model: Model) -> Self {
        self.model = model;
        self
    }
}

/// Coupling constant from the qubit current amplitude and inductance,
/// g = I₀ √(ω L / 2) with ħ = 1.
pub fn coupling_from_physical(current_amp: f64, inductance: f64, cavity_freq: f64) -> Result<f64> {
    if !(inductance > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "inductance must be positive, got {inductance}"
        )));
    }
    if !(cavity_freq > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cavity frequency must be positive, got {cavity_freq}"
        )));
    }
    if !(current_amp >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "current amplitude must be non-negative, got {current_amp}"
        )));
    }
    Ok(current_amp * (cavity_freq * inductance / 2.0).sqrt())
}
