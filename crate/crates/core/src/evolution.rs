//! Exact unitary evolution of a single qubit-cavity subsystem.
//!
//! The Hamiltonian is diagonalized once, H = V Λ V†, and states are
//! propagated by phase rotation in the eigenbasis,
//! ψ(t) = V e^{−iΛt} V† ψ(0). The spaces involved are a few dozen
//! dimensions, so dense diagonalization is exact to round-off and the cost
//! is amortized over every time point of a sweep.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{build_hamiltonian, OperatorMatrix};
use crate::params::SubsystemParams;
use crate::state::{StateVector, DOWN, UP};
use crate::C64;

/// Default sweep step, in units of 1/ω₁.
pub const DEFAULT_STEP: f64 = 0.05;
/// Default end of a measurement-time sweep.
pub const DEFAULT_T_STOP: f64 = 100.0;
/// End of the extended grid used for detuning scans.
pub const EXTENDED_T_STOP: f64 = 400.0;
/// Retained-population threshold of the truncation check.
pub const MAX_LEAKAGE: f64 = 0.01;

/// Uniform time grid `start, start + step, …` up to and including `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: DEFAULT_T_STOP,
            step: DEFAULT_STEP,
        }
    }
}

impl TimeGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let grid = Self { start, stop, step };
        grid.validate()?;
        Ok(grid)
    }

    /// `[0, 400]` at the default step.
    pub fn extended() -> Self {
        Self {
            stop: EXTENDED_T_STOP,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::InvalidGrid("grid bounds must be finite".into()));
        }
        if self.stop < self.start {
            return Err(Error::InvalidGrid(format!(
                "stop {} precedes start {}",
                self.stop, self.start
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        // tolerate round-off in (stop - start) / step landing just below an integer
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }
}

/// Eigendecomposition of a subsystem Hamiltonian.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<C64>,
    source: Option<SubsystemParams>,
}

impl Propagator {
    /// Builds and diagonalizes the Hamiltonian for `p`, remembering `p`.
    pub fn from_params(p: &SubsystemParams) -> Result<Self> {
        let h = build_hamiltonian(p)?;
        let mut prop = diagonalize(&h)?;
        prop.source = Some(*p);
        Ok(prop)
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    /// Parameters this propagator was built from, if it came from
    /// [`Propagator::from_params`].
    pub fn source(&self) -> Option<&SubsystemParams> {
        self.source.as_ref()
    }

    /// Whether this propagator is valid for `p`.
    pub fn matches(&self, p: &SubsystemParams) -> bool {
        self.source.as_ref() == Some(p)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// ‖V Λ V† − H‖_F / ‖H‖_F.
    pub fn reconstruction_error(&self, h: &OperatorMatrix) -> f64 {
        let lambda = DMatrix::from_diagonal(&self.eigenvalues.map(C64::from));
        let rebuilt = &self.eigenvectors * lambda * self.eigenvectors.adjoint();
        let h_norm = h.matrix().norm();
        let diff = (rebuilt - h.matrix()).norm();
        if h_norm > 0.0 {
            diff / h_norm
        } else {
            diff
        }
    }

    /// ‖V†V − 1‖_F.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        (self.eigenvectors.adjoint() * &self.eigenvectors - DMatrix::<C64>::identity(n, n)).norm()
    }

    /// Projects `psi0` onto the eigenbasis once so that it can be evaluated
    /// at many times.
    pub fn spectral<'a>(&'a self, psi0: &StateVector) -> Result<SpectralState<'a>> {
        if psi0.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi0.dim(),
            });
        }
        Ok(SpectralState {
            prop: self,
            n_fock: psi0.n_fock(),
            weights: self.eigenvectors.ad_mul(psi0.amplitudes()),
        })
    }
}

/// A state expanded in a propagator's eigenbasis.
#[derive(Debug, Clone)]
pub struct SpectralState<'a> {
    prop: &'a Propagator,
    n_fock: usize,
    weights: DVector<C64>,
}

impl SpectralState<'_> {
    pub fn at(&self, t: f64) -> StateVector {
        let rotated = DVector::from_iterator(
            self.weights.len(),
            self.weights
                .iter()
                .zip(self.prop.eigenvalues.iter())
                .map(|(w, &e)| w * C64::from_polar(1.0, -e * t)),
        );
        let amps = &self.prop.eigenvectors * rotated;
        StateVector::from_amplitudes(self.n_fock, amps)
            .expect("spectral state dimension fixed at construction")
    }
}

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
pub fn diagonalize(h: &OperatorMatrix) -> Result<Propagator> {
    let defect = h.hermiticity_defect();
    if defect > 1e-12 * h.max_abs() {
        return Err(Error::ContractViolation(format!(
            "diagonalize needs a Hermitian matrix, max |H - H†| = {defect:e}"
        )));
    }
    let n = h.dim();
    let eig = SymmetricEigen::new(h.matrix().clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Propagator {
        eigenvalues,
        eigenvectors,
        source: None,
    })
}

/// ψ(t) = V e^{−iΛt} V† ψ0.
pub fn propagate(prop: &Propagator, psi0: &StateVector, t: f64) -> Result<StateVector> {
    Ok(prop.spectral(psi0)?.at(t))
}

/// Subsystem state split by qubit component: `a[n]` multiplies |↑ n⟩ and
/// `b[n]` multiplies |↓ n⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub a: Vec<C64>,
    pub b: Vec<C64>,
}

impl CoefficientTable {
    pub fn n_fock(&self) -> usize {
        self.a.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.iter().chain(&self.b).map(|z| z.norm_sqr()).sum()
    }

    /// Copy with every Fock component `n >= levels` set to zero.
    pub fn truncated(&self, levels: usize) -> CoefficientTable {
        let cut = |v: &[C64]| {
            v.iter()
                .enumerate()
                .map(|(n, &z)| if n < levels { z } else { C64::from(0.0) })
                .collect()
        };
        CoefficientTable {
            a: cut(&self.a),
            b: cut(&self.b),
        }
    }

    /// Copy multiplied by a global factor.
    pub fn scaled(&self, factor: C64) -> CoefficientTable {
        CoefficientTable {
            a: self.a.iter().map(|z| z * factor).collect(),
            b: self.b.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn to_state(&self) -> Result<StateVector> {
        if self.a.len() != self.b.len() {
            return Err(Error::DimensionMismatch {
                expected: self.a.len(),
                got: self.b.len(),
            });
        }
        let n_fock = self.a.len();
        let amps = DVector::from_iterator(2 * n_fock, self.a.iter().chain(&self.b).copied());
        StateVector::from_amplitudes(n_fock, amps)
    }
}

pub fn coefficients(psi: &StateVector) -> CoefficientTable {
    let n_fock = psi.n_fock();
    CoefficientTable {
        a: (0..n_fock).map(|n| psi.amplitude(UP, n)).collect(),
        b: (0..n_fock).map(|n| psi.amplitude(DOWN, n)).collect(),
    }
}

/// Outcome of comparing a run against a run in a larger Fock space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub n_fock: usize,
    pub reference_n_fock: usize,
    /// Largest population found in levels `n >= n_fock` of the reference run.
    pub max_leakage: f64,
    /// Smallest |⟨ψ_small(t)|P ψ_big(t)⟩|² over the grid, P the projector
    /// onto the retained levels.
    pub min_fidelity: f64,
    pub passed: bool,
}

/// Checks that `n_fock = p.n_fock` levels suffice for `psi0` up to `t_max`.
///
/// The reference run uses `factor * p.n_fock` levels; the check passes when
/// the population above level `n_fock − 1` stays at or below 0.01.
/// `psi0` may be given in any space that fits inside the reference space;
/// components it has above the retained levels count as leakage at t = 0.
pub fn truncation_check(
    p: &SubsystemParams,
    psi0: &StateVector,
    t_max: f64,
    factor: usize,
) -> Result<TruncationReport> {
    truncation_check_on(p, psi0, &TimeGrid::new(0.0, t_max, DEFAULT_STEP)?, factor)
}

pub fn truncation_check_on(
    p: &SubsystemParams,
    psi0: &StateVector,
    grid: &TimeGrid,
    factor: usize,
) -> Result<TruncationReport> {
    if factor < 2 {
        return Err(Error::InvalidParameter(format!(
            "reference factor must be at least 2, got {factor}"
        )));
    }
    p.validate()?;
    grid.validate()?;
    let big_n = factor * p.n_fock;
    if psi0.n_fock() > big_n {
        return Err(Error::InvalidState(format!(
            "initial state uses {} Fock levels, more than the reference space of {big_n}",
            psi0.n_fock()
        )));
    }
    let big_params = p.with_n_fock(big_n);
    let big_prop = Propagator::from_params(&big_params)?;
    let big0 = psi0.resized(big_n)?.normalized()?;
    let big_spec = big_prop.spectral(&big0)?;

    let small_prop = Propagator::from_params(p)?;
    let small0 = psi0.resized(p.n_fock)?;
    let small0 = (small0.norm() > 0.0)
        .then(|| small0.normalized())
        .transpose()?;
    let small_spec = small0
        .as_ref()
        .map(|s| small_prop.spectral(s))
        .transpose()?;

    let mut max_leakage: f64 = 0.0;
    let mut min_fidelity: f64 = 1.0;
    for t in grid.points() {
        let big = big_spec.at(t);
        max_leakage = max_leakage.max(big.population_from_level(p.n_fock));
        let fidelity = match &small_spec {
            Some(spec) => spec.at(t).inner(&big.resized(p.n_fock)?)?.norm_sqr(),
            None => 0.0,
        };
        min_fidelity = min_fidelity.min(fidelity);
    }
    Ok(TruncationReport {
        n_fock: p.n_fock,
        reference_n_fock: big_n,
        max_leakage,
        min_fidelity,
        passed: max_leakage <= MAX_LEAKAGE,
    })
}
