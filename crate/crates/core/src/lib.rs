//! Entanglement swapping between two non-interacting qubit-cavity systems.
//!
//! Each qubit is coupled to its own cavity mode (quantum Rabi or
//! Jaynes-Cummings interaction) and evolved exactly in a truncated Fock space.
//! At a chosen time the two photon modes are projected onto the singlet Bell
//! state, which leaves the qubits in a (generally entangled) pure state whose
//! concurrence is reported.
//!
//! Module map:
//!
//! - [`params`], [`operators`], [`state`]: system parameters, operator
//!   matrices and initial product states.
//! - [`evolution`]: Hermitian eigendecomposition, propagation, coefficient
//!   tables and the truncation-adequacy check.
//! - [`swap`]: Bell-state projection and pure-state concurrence.
//! - [`experiments`]: named initial-state scenarios, figure parameter sets and
//!   the sweep engine.
//!
//! Conventions: ħ = 1, frequencies in units of the first cavity frequency,
//! basis index `q * n_fock + n` with `q = 0` the ground qubit state |↑⟩ and
//! `q = 1` the excited state |↓⟩.

// Negated float comparisons in this crate deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evolution;
pub mod experiments;
pub mod operators;
pub mod params;
pub mod state;
pub mod swap;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use evolution::{
    coefficients, diagonalize, propagate, truncation_check, CoefficientTable, Propagator,
    SpectralState, TimeGrid, TruncationReport,
};
pub use experiments::{
    build_scenario, compare_models, detuning_scan, figure, sweep, Figure, FigureCurve,
    InitialState, ModelComparison, Overrides, Scenario, ScenarioLabel, SweepPoint, SweepSeries,
};
pub use operators::{
    build_annihilation, build_excitation_number, build_hamiltonian, build_parity, OperatorMatrix,
};
pub use params::{coupling_from_physical, Model, QubitConvention, SubsystemParams};
pub use state::{make_initial_state, StateVector};
pub use swap::{
    bsm_project, concurrence_magic_basis, concurrence_pure, concurrence_spin_flip, swap_at,
    BellProjector, Projection, SwapOutcome, TwoQubitState, DEFAULT_EPS_BSM,
};
