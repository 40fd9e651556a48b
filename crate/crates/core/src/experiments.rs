//! Named initial-state scenarios, figure parameter sets and the sweep engine.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{coefficients, truncation_check, Propagator, TimeGrid, TruncationReport};
use crate::params::{Model, QubitConvention, SubsystemParams, DEFAULT_COUPLING};
use crate::state::{make_initial_state, StateVector};
use crate::swap::{SwapOutcome, DEFAULT_EPS_BSM};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioLabel {
    /// |↓0⟩ ⊗ |↑1⟩
    E0G1,
    /// (|↓0⟩ + |↓1⟩)/√2 ⊗ (|↑0⟩ + |↑1⟩)/√2
    E01G01,
    /// ½ Σ_{n≤3} |↓n⟩ ⊗ ½ Σ_{m≤3} |↑m⟩
    E0123G0123,
    /// |↓0⟩ ⊗ |↓0⟩
    E0E0,
    /// (|↓0⟩ + |↓1⟩)/√2 ⊗ (|↓0⟩ + |↓1⟩)/√2
    E01E01,
    /// ½ Σ_{n≤3} |↓n⟩ ⊗ ½ Σ_{m≤3} |↓m⟩
    E0123E0123,
    Custom,
}

impl ScenarioLabel {
    pub const NAMED: [ScenarioLabel; 6] = [
        ScenarioLabel::E0G1,
        ScenarioLabel::E01G01,
        ScenarioLabel::E0123G0123,
        ScenarioLabel::E0E0,
        ScenarioLabel::E01E01,
        ScenarioLabel::E0123E0123,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioLabel::E0G1 => "e0g1",
            ScenarioLabel::E01G01 => "e01g01",
            ScenarioLabel::E0123G0123 => "e0123g0123",
            ScenarioLabel::E0E0 => "e0e0",
            ScenarioLabel::E01E01 => "e01e01",
            ScenarioLabel::E0123E0123 => "e0123e0123",
            ScenarioLabel::Custom => "custom",
        }
    }

    /// Both subsystems start in the same state.
    pub fn is_identical_pair(self) -> bool {
        matches!(
            self,
            ScenarioLabel::E0E0 | ScenarioLabel::E01E01 | ScenarioLabel::E0123E0123
        )
    }

    /// Initial states of subsystems 1 and 2, `None` for `Custom`.
    pub fn initial_states(self) -> Option<(InitialState, InitialState)> {
        use InitialState as S;
        let pair = match self {
            ScenarioLabel::E0G1 => (S::excited(1), S::ground_photons(&[0.0, 1.0])),
            ScenarioLabel::E01G01 => (S::excited(2), S::ground(2)),
            ScenarioLabel::E0123G0123 => (S::excited(4), S::ground(4)),
            ScenarioLabel::E0E0 => (S::excited(1), S::excited(1)),
            ScenarioLabel::E01E01 => (S::excited(2), S::excited(2)),
            ScenarioLabel::E0123E0123 => (S::excited(4), S::excited(4)),
            ScenarioLabel::Custom => return None,
        };
        Some(pair)
    }
}

impl fmt::Display for ScenarioLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        ScenarioLabel::NAMED
            .into_iter()
            .chain([ScenarioLabel::Custom])
            .find(|l| l.as_str() == lower)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

/// Product initial state of one subsystem, independent of truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    /// Weights of (|↑⟩, |↓⟩).
    pub qubit: [C64; 2],
    /// Weights of |0⟩, |1⟩, …
    pub photons: Vec<C64>,
}

impl InitialState {
    /// Excited qubit with equal weights on the first `levels` Fock states.
    pub fn excited(levels: usize) -> Self {
        Self {
            qubit: [C64::from(0.0), C64::from(1.0)],
            photons: vec![C64::from(1.0); levels],
        }
    }

    /// Ground qubit with equal weights on the first `levels` Fock states.
    pub fn ground(levels: usize) -> Self {
        Self {
            qubit: [C64::from(1.0), C64::from(0.0)],
            photons: vec![C64::from(1.0); levels],
        }
    }

    pub fn ground_photons(weights: &[f64]) -> Self {
        Self {
            qubit: [C64::from(1.0), C64::from(0.0)],
            photons: weights.iter().map(|&w| C64::from(w)).collect(),
        }
    }

    /// Highest occupied Fock level + 1.
    pub fn photon_levels(&self) -> usize {
        self.photons
            .iter()
            .rposition(|z| *z != C64::from(0.0))
            .map_or(0, |i| i + 1)
    }

    pub fn to_state(&self, n_fock: usize) -> Result<StateVector> {
        let used = self.photon_levels().max(1);
        make_initial_state(
            self.qubit,
            &self.photons[..used.min(self.photons.len())],
            n_fock,
        )
    }
}

/// Parameter overrides applied on top of the scenario defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub model: Option<Model>,
    pub n_fock: Option<usize>,
    pub coupling: Option<f64>,
    /// Sets ω₁ = Ω₁.
    pub omega1: Option<f64>,
    /// Sets ω₂ = Ω₂.
    pub omega2: Option<f64>,
    pub convention: Option<QubitConvention>,
    pub grid: Option<TimeGrid>,
    pub eps_bsm: Option<f64>,
}

impl Overrides {
    /// Detuning and grid used by each figure.
    pub fn for_figure(id: u8) -> Result<Self> {
        let (omega2, grid) = match id {
            1 | 2 => (1.0, TimeGrid::default()),
            3 => (
                0.95,
                TimeGrid {
                    stop: 200.0,
                    ..TimeGrid::default()
                },
            ),
            4 | 5 => (0.8, TimeGrid::extended()),
            other => return Err(Error::UnknownFigure(other)),
        };
        Ok(Self {
            omega2: Some(omega2),
            grid: Some(grid),
            ..Self::default()
        })
    }
}

/// Complete specification of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub label: ScenarioLabel,
    pub params1: SubsystemParams,
    pub params2: SubsystemParams,
    pub init1: InitialState,
    pub init2: InitialState,
    pub grid: TimeGrid,
    pub eps_bsm: f64,
}

impl Scenario {
    pub fn custom(
        params1: SubsystemParams,
        params2: SubsystemParams,
        init1: InitialState,
        init2: InitialState,
        grid: TimeGrid,
    ) -> Result<Self> {
        let s = Self {
            label: ScenarioLabel::Custom,
            params1,
            params2,
            init1,
            init2,
            grid,
            eps_bsm: DEFAULT_EPS_BSM,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.params1.validate()?;
        self.params2.validate()?;
        self.grid.validate()?;
        if !(self.eps_bsm >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "BSM threshold must be non-negative, got {}",
                self.eps_bsm
            )));
        }
        Ok(())
    }

    /// Applies `o`; fields left `None` are untouched.
    pub fn apply(&mut self, o: &Overrides) {
        for p in [&mut self.params1, &mut self.params2] {
            if let Some(m) = o.model {
                p.model = m;
            }
            if let Some(n) = o.n_fock {
                p.n_fock = n;
            }
            if let Some(g) = o.coupling {
                p.coupling = g;
            }
            if let Some(c) = o.convention {
                p.qubit_convention = c;
            }
        }
        if let Some(w) = o.omega1 {
            self.params1.cavity_freq = w;
            self.params1.qubit_freq = w;
        }
        if let Some(w) = o.omega2 {
            self.params2.cavity_freq = w;
            self.params2.qubit_freq = w;
        }
        if let Some(grid) = o.grid {
            self.grid = grid;
        }
        if let Some(eps) = o.eps_bsm {
            self.eps_bsm = eps;
        }
    }

    pub fn with_model(&self, model: Model) -> Scenario {
        let mut s = self.clone();
        s.params1.model = model;
        s.params2.model = model;
        s
    }

    /// Same scenario with ω₂ = Ω₂ = `omega2`.
    pub fn with_omega2(&self, omega2: f64) -> Scenario {
        let mut s = self.clone();
        s.params2.cavity_freq = omega2;
        s.params2.qubit_freq = omega2;
        s
    }

    /// Truncation check of both subsystems against a `factor`-times larger
    /// Fock space. Initial states wider than `n_fock` are allowed here and
    /// show up as leakage.
    pub fn truncation_reports(&self, t_max: f64, factor: usize) -> Result<[TruncationReport; 2]> {
        let check = |p: &SubsystemParams, init: &InitialState| {
            let psi0 = init.to_state(p.n_fock.max(init.photon_levels()))?;
            truncation_check(p, &psi0, t_max, factor)
        };
        Ok([
            check(&self.params1, &self.init1)?,
            check(&self.params2, &self.init2)?,
        ])
    }

    pub fn initial_vectors(&self) -> Result<(StateVector, StateVector)> {
        Ok((
            self.init1.to_state(self.params1.n_fock)?,
            self.init2.to_state(self.params2.n_fock)?,
        ))
    }
}

/// Scenario for a named label with defaults ω = Ω = 1, g = 0.2, Rabi
/// coupling, 10 Fock levels and t′ ∈ [0, 100] in steps of 0.05.
pub fn build_scenario(label: &str, overrides: &Overrides) -> Result<Scenario> {
    let label: ScenarioLabel = label.parse()?;
    let (init1, init2) = label.initial_states().ok_or_else(|| {
        Error::InvalidParameter("the custom label needs explicit initial states".into())
    })?;
    let params = SubsystemParams::resonant(1.0, DEFAULT_COUPLING, Model::Rabi);
    let mut s = Scenario {
        label,
        params1: params,
        params2: params,
        init1,
        init2,
        grid: TimeGrid::default(),
        eps_bsm: DEFAULT_EPS_BSM,
    };
    s.apply(overrides);
    s.validate()?;
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub t_prime: f64,
    /// `None` where the Bell-measurement success probability is below the
    /// scenario threshold.
    pub concurrence: Option<f64>,
    pub success_prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSeries {
    pub scenario: Scenario,
    pub points: Vec<SweepPoint>,
}

impl SweepSeries {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest defined concurrence, `None` if no point is defined.
    pub fn max_concurrence(&self) -> Option<f64> {
        self.points
            .iter()
            .filter_map(|p| p.concurrence)
            .reduce(f64::max)
    }

    pub fn defined(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points
            .iter()
            .filter_map(|p| p.concurrence.map(|c| (p.t_prime, c)))
    }
}

/// Evaluates the swap at every grid time. Points are computed in parallel
/// and returned in grid order.
pub fn sweep(s: &Scenario) -> Result<SweepSeries> {
    s.validate()?;
    let prop1 = Propagator::from_params(&s.params1)?;
    let prop2 = if s.params2 == s.params1 {
        prop1.clone()
    } else {
        Propagator::from_params(&s.params2)?
    };
    let (psi1, psi2) = s.initial_vectors()?;
    let spec1 = prop1.spectral(&psi1)?;
    let spec2 = prop2.spectral(&psi2)?;
    let points = (0..s.grid.len())
        .into_par_iter()
        .map(|i| {
            let t = s.grid.point(i);
            let c1 = coefficients(&spec1.at(t));
            let c2 = coefficients(&spec2.at(t));
            let out = SwapOutcome::from_tables(&c1, &c2, s.eps_bsm)?;
            Ok(SweepPoint {
                t_prime: t,
                concurrence: out.concurrence,
                success_prob: out.success_prob,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepSeries {
        scenario: s.clone(),
        points,
    })
}

/// Rabi and JC sweeps of the same scenario on the same grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelComparison {
    pub rabi: SweepSeries,
    pub jc: SweepSeries,
    /// Over points where both concurrences are defined.
    pub max_abs_diff: f64,
    pub mean_abs_diff: f64,
    pub compared_points: usize,
}

pub fn compare_models(s: &Scenario) -> Result<ModelComparison> {
    let rabi = sweep(&s.with_model(Model::Rabi))?;
    let jc = sweep(&s.with_model(Model::Jc))?;
    let diffs: Vec<f64> = rabi
        .points
        .iter()
        .zip(&jc.points)
        .filter_map(|(r, j)| Some((r.concurrence? - j.concurrence?).abs()))
        .collect();
    let compared_points = diffs.len();
    let max_abs_diff = diffs.iter().copied().fold(0.0, f64::max);
    let mean_abs_diff = if compared_points > 0 {
        diffs.iter().sum::<f64>() / compared_points as f64
    } else {
        0.0
    };
    Ok(ModelComparison {
        rabi,
        jc,
        max_abs_diff,
        mean_abs_diff,
        compared_points,
    })
}

/// One sweep per ω₂ = Ω₂ value, on the base scenario's grid.
pub fn detuning_scan(base: &Scenario, omega2: &[f64]) -> Result<Vec<SweepSeries>> {
    omega2
        .iter()
        .map(|&w| sweep(&base.with_omega2(w)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureCurve {
    /// File-name stem, e.g. `A` or `top_jc`.
    pub name: String,
    pub scenario: Scenario,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub id: u8,
    pub title: String,
    pub curves: Vec<FigureCurve>,
}

/// Curves and parameters of figures 1 to 5.
pub fn figure(id: u8) -> Result<Figure> {
    let o = Overrides::for_figure(id)?;
    let curve = |name: &str, label: &str, model: Model| -> Result<FigureCurve> {
        let overrides = Overrides {
            model: Some(model),
            ..o.clone()
        };
        Ok(FigureCurve {
            name: name.to_string(),
            scenario: build_scenario(label, &overrides)?,
        })
    };
    let (title, curves) = match id {
        1 => (
            "QQ concurrence, different initial states, w = W = 1, g = 0.2",
            vec![
                curve("A", "e0g1", Model::Rabi)?,
                curve("B", "e01g01", Model::Rabi)?,
                curve("C", "e0123g0123", Model::Rabi)?,
            ],
        ),
        2 => (
            "QQ concurrence, JC vs Rabi coupling, w = W = 1, g = 0.2",
            vec![
                curve("top_jc", "e0g1", Model::Jc)?,
                curve("top_rabi", "e0g1", Model::Rabi)?,
                curve("bottom_jc", "e0e0", Model::Jc)?,
                curve("bottom_rabi", "e0e0", Model::Rabi)?,
            ],
        ),
        3 => (
            "QQ concurrence, identical initial states, w2 = W2 = 0.95, g = 0.2",
            vec![
                curve("A", "e0e0", Model::Rabi)?,
                curve("B", "e01e01", Model::Rabi)?,
                curve("C", "e0123e0123", Model::Rabi)?,
            ],
        ),
        4 => (
            "QQ concurrence, e0g1, w2 = W2 = 0.8, g = 0.2",
            vec![curve("A", "e0g1", Model::Rabi)?],
        ),
        5 => (
            "QQ concurrence, e0e0, w2 = W2 = 0.8, g = 0.2",
            vec![curve("A", "e0e0", Model::Rabi)?],
        ),
        other => return Err(Error::UnknownFigure(other)),
    };
    Ok(Figure {
        id,
        title: title.to_string(),
        curves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{DOWN, UP};

    #[test]
    fn labels_round_trip() {
        for l in ScenarioLabel::NAMED {
            assert_eq!(l.as_str().parse::<ScenarioLabel>().unwrap(), l);
        }
        assert_eq!(
            "e0g2".parse::<ScenarioLabel>(),
            Err(Error::UnknownLabel("e0g2".into()))
        );
    }

    #[test]
    fn named_initial_states() {
        let s = build_scenario("e0g1", &Overrides::default()).unwrap();
        let (p1, p2) = s.initial_vectors().unwrap();
        assert_eq!(p1, StateVector::basis(10, DOWN, 0).unwrap());
        assert_eq!(p2, StateVector::basis(10, UP, 1).unwrap());

        let s = build_scenario("e01e01", &Overrides::default()).unwrap();
        let (p1, p2) = s.initial_vectors().unwrap();
        assert_eq!(p1, p2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p1.amplitude(DOWN, 0).re - h).abs() < 1e-15);
        assert!((p1.amplitude(DOWN, 1).re - h).abs() < 1e-15);

        let s = build_scenario("e0123g0123", &Overrides::default()).unwrap();
        let (p1, p2) = s.initial_vectors().unwrap();
        for n in 0..4 {
            assert!((p1.amplitude(DOWN, n).re - 0.5).abs() < 1e-15);
            assert!((p2.amplitude(UP, n).re - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn defaults_and_figure_overrides() {
        let s = build_scenario("e0e0", &Overrides::default()).unwrap();
        assert_eq!(s.params1.cavity_freq, 1.0);
        assert_eq!(s.params2.qubit_freq, 1.0);
        assert_eq!(s.params1.coupling, 0.2);
        assert_eq!(s.params1.n_fock, 10);
        assert_eq!(s.grid, TimeGrid::default());

        let s = build_scenario("e0e0", &Overrides::for_figure(3).unwrap()).unwrap();
        assert_eq!(s.params2.cavity_freq, 0.95);
        assert_eq!(s.params2.qubit_freq, 0.95);
        assert_eq!(s.params1.cavity_freq, 1.0);
        assert!(Overrides::for_figure(6).is_err());
    }

    #[test]
    fn unknown_label_is_an_error() {
        assert!(matches!(
            build_scenario("e9", &Overrides::default()),
            Err(Error::UnknownLabel(_))
        ));
        assert!(build_scenario("custom", &Overrides::default()).is_err());
    }

    #[test]
    fn multiphoton_state_needs_room() {
        let o = Overrides {
            n_fock: Some(2),
            ..Overrides::default()
        };
        let s = build_scenario("e0123e0123", &o).unwrap();
        assert!(matches!(sweep(&s), Err(Error::InvalidState(_))));
    }

    #[test]
    fn truncation_reports_flag_oversized_states() {
        let s = build_scenario("e0g1", &Overrides::default()).unwrap();
        assert!(s
            .truncation_reports(100.0, 2)
            .unwrap()
            .iter()
            .all(|r| r.passed));

        let o = Overrides {
            n_fock: Some(2),
            ..Overrides::default()
        };
        let s = build_scenario("e0123g0123", &o).unwrap();
        let [r1, r2] = s.truncation_reports(10.0, 2).unwrap();
        assert!(!r1.passed && !r2.passed);
        assert!(r1.max_leakage >= 0.5 - 1e-12);

        let o = Overrides {
            coupling: Some(0.0),
            ..Overrides::default()
        };
        let s = build_scenario("e0g1", &o).unwrap();
        for r in s.truncation_reports(100.0, 2).unwrap() {
            assert_eq!(r.max_leakage, 0.0);
        }
    }

    #[test]
    fn figure_curve_counts() {
        let counts: Vec<usize> = (1..=5).map(|i| figure(i).unwrap().curves.len()).collect();
        assert_eq!(counts, [3, 4, 3, 1, 1]);
        let f5 = figure(5).unwrap();
        assert_eq!(f5.curves[0].scenario.label, ScenarioLabel::E0E0);
        assert_eq!(f5.curves[0].scenario.params2.cavity_freq, 0.8);
        assert!(figure(0).is_err());
    }

    #[test]
    fn sweep_is_deterministic_and_grid_stable() {
        let o = Overrides {
            grid: Some(TimeGrid::new(0.0, 20.0, 0.1).unwrap()),
            omega2: Some(0.9),
            ..Overrides::default()
        };
        let s = build_scenario("e01g01", &o).unwrap();
        let a = sweep(&s).unwrap();
        let b = sweep(&s).unwrap();
        assert_eq!(a, b);

        let mut fine = s.clone();
        fine.grid.step /= 2.0;
        let f = sweep(&fine).unwrap();
        assert_eq!(f.len(), 2 * a.len() - 1);
        for (i, p) in a.points.iter().enumerate() {
            let q = &f.points[2 * i];
            assert_eq!(p.t_prime, q.t_prime);
            match (p.concurrence, q.concurrence) {
                (Some(x), Some(y)) => assert!((x - y).abs() <= 1e-10),
                (None, None) => {}
                _ => panic!("definedness differs at t = {}", p.t_prime),
            }
        }
    }

    #[test]
    fn zero_coupling_models_agree() {
        let o = Overrides {
            coupling: Some(0.0),
            grid: Some(TimeGrid::new(0.0, 10.0, 0.5).unwrap()),
            ..Overrides::default()
        };
        for label in ScenarioLabel::NAMED {
            let cmp = compare_models(&build_scenario(label.as_str(), &o).unwrap()).unwrap();
            assert_eq!(cmp.max_abs_diff, 0.0);
            for (r, j) in cmp.rabi.points.iter().zip(&cmp.jc.points) {
                assert_eq!(r.concurrence.is_some(), j.concurrence.is_some());
                assert!((r.success_prob - j.success_prob).abs() < 1e-14);
                if let Some(c) = r.concurrence {
                    assert!(c.abs() < 1e-12 || label.is_identical_pair());
                }
            }
        }
    }

    #[test]
    fn detuning_scan_degenerate_point() {
        let o = Overrides {
            grid: Some(TimeGrid::new(0.0, 10.0, 0.25).unwrap()),
            ..Overrides::default()
        };
        let base = build_scenario("e0g1", &o).unwrap();
        let scans = detuning_scan(&base, &[1.0, 0.95]).unwrap();
        assert_eq!(scans.len(), 2);
        assert_eq!(scans[0], sweep(&base).unwrap());
        assert_eq!(scans[1].scenario.params2.qubit_freq, 0.95);
    }
}
