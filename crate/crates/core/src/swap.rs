//! Bell-state measurement on the two photon modes and the concurrence of the
//! qubit pair it leaves behind.
//!
//! Projecting the product of the two subsystem states onto ψ⁻ of the photons
//! gives ⟨ψ⁻|Ψ⟩ = ψ_QQ / √2, where the qubit-pair amplitudes are 2×2
//! determinants of the n = 0, 1 coefficients:
//!
//! ```text
//! c_↑↑ = a₀ã₁ − a₁ã₀    c_↑↓ = a₀b̃₁ − a₁b̃₀
//! c_↓↑ = b₀ã₁ − b₁ã₀    c_↓↓ = b₀b̃₁ − b₁b̃₀
//! ```
//!
//! Fock components with n ≥ 2 never enter.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{coefficients, CoefficientTable, Propagator};
use crate::state::StateVector;
use crate::C64;

/// Below this success probability concurrence is reported as undefined.
pub const DEFAULT_EPS_BSM: f64 = 1e-9;

const NORMALIZED_TOL: f64 = 1e-12;

/// Photon-pair Bell state used as the measurement outcome.
///
/// Each variant is (1/√2) Σ w(n₁, n₂)|n₁ n₂⟩ over n₁, n₂ ∈ {0, 1} with
/// integer weights w.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BellProjector {
    /// (|01⟩ − |10⟩)/√2.
    #[default]
    PsiMinus,
    /// (|01⟩ + |10⟩)/√2.
    PsiPlus,
    /// (|00⟩ + |11⟩)/√2.
    PhiPlus,
    /// (|00⟩ − |11⟩)/√2.
    PhiMinus,
}

impl BellProjector {
    /// Weights `w[n1][n2]`.
    pub fn weights(self) -> [[f64; 2]; 2] {
        match self {
            BellProjector::PsiMinus => [[0.0, 1.0], [-1.0, 0.0]],
            BellProjector::PsiPlus => [[0.0, 1.0], [1.0, 0.0]],
            BellProjector::PhiPlus => [[1.0, 0.0], [0.0, 1.0]],
            BellProjector::PhiMinus => [[1.0, 0.0], [0.0, -1.0]],
        }
    }

    /// Amplitudes on |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn amplitudes(self) -> [f64; 4] {
        let w = self.weights();
        [w[0][0], w[0][1], w[1][0], w[1][1]].map(|x| x * FRAC_1_SQRT_2)
    }

    /// Unnormalized qubit-pair state √2 ⟨B|Ψ⟩ and success probability.
    pub fn project(self, c1: &CoefficientTable, c2: &CoefficientTable) -> Projection {
        let w = self.weights();
        // qubit component q of subsystem k at Fock level n
        let comp = |t: &CoefficientTable, q: usize, n: usize| if q == 0 { t.a[n] } else { t.b[n] };
        let mut amps = [C64::from(0.0); 4];
        for (q1, q2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let mut acc = C64::from(0.0);
            for (n1, n2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                if w[n1][n2] != 0.0 {
                    acc += comp(c1, q1, n1) * comp(c2, q2, n2) * w[n1][n2];
                }
            }
            amps[2 * q1 + q2] = acc;
        }
        let state = TwoQubitState::unnormalized(amps);
        Projection {
            success_prob: 0.5 * state.norm_sq(),
            state,
        }
    }
}

/// Qubit-pair state, amplitudes ordered ↑↑, ↑↓, ↓↑, ↓↓.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitState {
    amps: [C64; 4],
    /// Norm² of the vector before normalization.
    norm_sq: f64,
    normalized: bool,
}

impl TwoQubitState {
    pub fn unnormalized(amps: [C64; 4]) -> Self {
        Self {
            amps,
            norm_sq: amps.iter().map(|z| z.norm_sqr()).sum(),
            normalized: false,
        }
    }

    /// Normalizes `amps`. Fails for the zero vector.
    pub fn normalized_from(amps: [C64; 4]) -> Result<Self> {
        Self::unnormalized(amps)
            .normalize()
            .ok_or_else(|| Error::InvalidState("cannot normalize a zero two-qubit vector".into()))
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        self.amps
    }

    pub fn up_up(&self) -> C64 {
        self.amps[0]
    }

    pub fn up_down(&self) -> C64 {
        self.amps[1]
    }

    pub fn down_up(&self) -> C64 {
        self.amps[2]
    }

    pub fn down_down(&self) -> C64 {
        self.amps[3]
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn is_zero_norm(&self) -> bool {
        self.norm_sq == 0.0
    }

    /// Unit-norm copy, or `None` for a zero vector. `norm_sq` keeps the
    /// pre-normalization value.
    pub fn normalize(&self) -> Option<Self> {
        if self.norm_sq == 0.0 || !self.norm_sq.is_finite() {
            return None;
        }
        let scale = self.norm_sq.sqrt().recip();
        Some(Self {
            amps: self.amps.map(|z| z * scale),
            norm_sq: self.norm_sq,
            normalized: true,
        })
    }
}

/// Result of a Bell-state projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub state: TwoQubitState,
    pub success_prob: f64,
}

/// Projects the photon pair onto ψ⁻.
pub fn bsm_project(c1: &CoefficientTable, c2: &CoefficientTable) -> Projection {
    BellProjector::PsiMinus.project(c1, c2)
}

/// 2|c_↑↑ c_↓↓ − c_↑↓ c_↓↑| for a normalized state.
///
/// Returns NaN for a zero-norm state and a contract violation for any other
/// state not marked normalized.
pub fn concurrence_pure(s: &TwoQubitState) -> Result<f64> {
    check_normalized(s)?;
    if s.is_zero_norm() {
        return Ok(f64::NAN);
    }
    let [uu, ud, du, dd] = s.amps;
    Ok((2.0 * (uu * dd - ud * du).norm()).min(1.0))
}

/// |Σ αᵢ²| with αᵢ = ⟨eᵢ|ψ⟩ in the magic basis
/// e₁ = (|↑↑⟩ + |↓↓⟩)/√2, e₂ = i(|↑↑⟩ − |↓↓⟩)/√2,
/// e₃ = i(|↑↓⟩ + |↓↑⟩)/√2, e₄ = (|↓↑⟩ − |↑↓⟩)/√2.
pub fn concurrence_magic_basis(s: &TwoQubitState) -> Result<f64> {
    check_normalized(s)?;
    if s.is_zero_norm() {
        return Ok(f64::NAN);
    }
    let [uu, ud, du, dd] = s.amps;
    let h = C64::from(FRAC_1_SQRT_2);
    let i = C64::i();
    // ⟨e|ψ⟩ conjugates the basis coefficients
    let alpha = [
        h * (uu + dd),
        -i * h * (uu - dd),
        -i * h * (ud + du),
        h * (du - ud),
    ];
    Ok(alpha.iter().map(|a| a * a).sum::<C64>().norm())
}

/// |⟨ψ|σ_y ⊗ σ_y|ψ*⟩|.
pub fn concurrence_spin_flip(s: &TwoQubitState) -> Result<f64> {
    check_normalized(s)?;
    if s.is_zero_norm() {
        return Ok(f64::NAN);
    }
    let i = C64::i();
    let sigma_y = [[C64::from(0.0), -i], [i, C64::from(0.0)]];
    let psi = s.amps;
    let mut flipped = [C64::from(0.0); 4];
    for (r, out) in flipped.iter_mut().enumerate() {
        for c in 0..4 {
            *out += sigma_y[r / 2][c / 2] * sigma_y[r % 2][c % 2] * psi[c].conj();
        }
    }
    Ok(psi
        .iter()
        .zip(&flipped)
        .map(|(p, f)| p.conj() * f)
        .sum::<C64>()
        .norm())
}

fn check_normalized(s: &TwoQubitState) -> Result<()> {
    if s.is_zero_norm() {
        return Ok(());
    }
    let norm_sq: f64 = s.amps.iter().map(|z| z.norm_sqr()).sum();
    if !s.normalized || (norm_sq - 1.0).abs() > NORMALIZED_TOL {
        return Err(Error::ContractViolation(
            "concurrence requires a normalized two-qubit state".into(),
        ));
    }
    Ok(())
}

/// Concurrence and Bell-measurement yield at one measurement time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapOutcome {
    /// `None` when the success probability is below the threshold.
    pub concurrence: Option<f64>,
    pub success_prob: f64,
    /// Normalized post-measurement state, when defined.
    pub state: Option<TwoQubitState>,
}

impl SwapOutcome {
    /// Builds the outcome from the two subsystem coefficient tables.
    pub fn from_tables(c1: &CoefficientTable, c2: &CoefficientTable, eps_bsm: f64) -> Result<Self> {
        let proj = bsm_project(c1, c2);
        if !(proj.success_prob >= eps_bsm) {
            return Ok(Self {
                concurrence: None,
                success_prob: proj.success_prob,
                state: None,
            });
        }
        let state = proj
            .state
            .normalize()
            .expect("success probability above threshold implies nonzero norm");
        Ok(Self {
            concurrence: Some(concurrence_pure(&state)?),
            success_prob: proj.success_prob,
            state: Some(state),
        })
    }
}

/// Evolves both subsystems to `t_prime`, projects the photons onto ψ⁻ and
/// returns the qubit-pair concurrence.
pub fn swap_at(
    prop1: &Propagator,
    prop2: &Propagator,
    psi1: &StateVector,
    psi2: &StateVector,
    t_prime: f64,
    eps_bsm: f64,
) -> Result<SwapOutcome> {
    let s1 = prop1.spectral(psi1)?.at(t_prime);
    let s2 = prop2.spectral(psi2)?.at(t_prime);
    SwapOutcome::from_tables(&coefficients(&s1), &coefficients(&s2), eps_bsm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{Model, SubsystemParams};
    use crate::state::{DOWN, UP};
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::from(re)
    }

    fn table(psi: &StateVector) -> CoefficientTable {
        coefficients(psi)
    }

    #[test]
    fn projector_is_normalized_and_antisymmetric() {
        for b in [
            BellProjector::PsiMinus,
            BellProjector::PsiPlus,
            BellProjector::PhiPlus,
            BellProjector::PhiMinus,
        ] {
            let n: f64 = b.amplitudes().iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-15);
        }
        let w = BellProjector::PsiMinus.weights();
        assert_eq!(w[0][0], 0.0);
        assert_eq!(w[1][1], 0.0);
        assert_eq!(w[0][1], -w[1][0]);
    }

    #[test]
    fn ground_vacuum_and_ground_one_photon() {
        let c1 = table(&StateVector::basis(4, UP, 0).unwrap());
        let c2 = table(&StateVector::basis(4, UP, 1).unwrap());
        let p = bsm_project(&c1, &c2);
        assert_eq!(p.state.amplitudes(), [c(1.0), c(0.0), c(0.0), c(0.0)]);
        assert_eq!(p.success_prob, 0.5);
    }

    #[test]
    fn product_state_at_zero_time() {
        let c1 = table(&StateVector::basis(4, DOWN, 0).unwrap());
        let c2 = table(&StateVector::basis(4, UP, 1).unwrap());
        let p = bsm_project(&c1, &c2);
        assert_eq!(p.state.amplitudes(), [c(0.0), c(0.0), c(1.0), c(0.0)]);
        let s = p.state.normalize().unwrap();
        assert_eq!(concurrence_pure(&s).unwrap(), 0.0);
    }

    #[test]
    fn reference_states() {
        let h = FRAC_1_SQRT_2;
        let singlet = TwoQubitState::normalized_from([c(0.0), c(h), c(-h), c(0.0)]).unwrap();
        let product = TwoQubitState::normalized_from([c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        let phi = TwoQubitState::normalized_from([c(h), c(0.0), c(0.0), c(h)]).unwrap();
        for f in [
            concurrence_pure,
            concurrence_magic_basis,
            concurrence_spin_flip,
        ] {
            assert!((f(&singlet).unwrap() - 1.0).abs() < 1e-15);
            assert_eq!(f(&product).unwrap(), 0.0);
            assert!((f(&phi).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn contract_checks() {
        let raw = TwoQubitState::unnormalized([c(1.0), c(0.0), c(0.0), c(1.0)]);
        assert!(matches!(
            concurrence_pure(&raw),
            Err(Error::ContractViolation(_))
        ));
        let zero = TwoQubitState::unnormalized([c(0.0); 4]);
        assert!(zero.is_zero_norm());
        assert!(concurrence_pure(&zero).unwrap().is_nan());
        assert!(zero.normalize().is_none());
    }

    #[test]
    fn jc_identical_subsystems_have_measurement_nodes() {
        // a₁b₀ vanishes where cos(gt) = 0
        let g = 0.2;
        let p = SubsystemParams::resonant(1.0, g, Model::Jc);
        let prop = Propagator::from_params(&p).unwrap();
        let psi = StateVector::basis(p.n_fock, DOWN, 0).unwrap();
        let t = std::f64::consts::FRAC_PI_2 / g;
        let out = swap_at(&prop, &prop, &psi, &psi, t, DEFAULT_EPS_BSM).unwrap();
        assert!(out.success_prob < DEFAULT_EPS_BSM);
        assert!(out.concurrence.is_none());
        let out = swap_at(&prop, &prop, &psi, &psi, 0.3 * t, DEFAULT_EPS_BSM).unwrap();
        assert_eq!(out.concurrence, Some(1.0));
    }

    #[test]
    fn jc_resonant_closed_form() {
        let g = 0.2;
        let p = SubsystemParams::resonant(1.0, g, Model::Jc);
        let prop = Propagator::from_params(&p).unwrap();
        let psi1 = StateVector::basis(p.n_fock, DOWN, 0).unwrap();
        let psi2 = StateVector::basis(p.n_fock, UP, 1).unwrap();
        for k in 1..200 {
            let t = 0.173 * k as f64;
            let out = swap_at(&prop, &prop, &psi1, &psi2, t, DEFAULT_EPS_BSM).unwrap();
            let s2 = (2.0 * g * t).sin().powi(2);
            let expected = s2 / (2.0 - s2);
            assert!((out.concurrence.unwrap() - expected).abs() < 1e-10);
        }
        let t = std::f64::consts::FRAC_PI_4 / g;
        let out = swap_at(&prop, &prop, &psi1, &psi2, t, DEFAULT_EPS_BSM).unwrap();
        assert!((out.concurrence.unwrap() - 1.0).abs() < 1e-12);
    }

    fn complex() -> impl Strategy<Value = C64> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
    }

    fn table_strategy() -> impl Strategy<Value = CoefficientTable> {
        (2usize..6)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec(complex(), n),
                    prop::collection::vec(complex(), n),
                )
            })
            .prop_map(|(a, b)| {
                let t = CoefficientTable { a, b };
                let norm = t.norm_sqr().sqrt().max(1e-6);
                t.scaled(C64::from(1.0 / norm))
            })
    }

    fn same_len(
        t1: CoefficientTable,
        t2: CoefficientTable,
    ) -> (CoefficientTable, CoefficientTable) {
        let n = t1.n_fock().min(t2.n_fock());
        let cut = |t: CoefficientTable| CoefficientTable {
            a: t.a[..n].to_vec(),
            b: t.b[..n].to_vec(),
        };
        (cut(t1), cut(t2))
    }

    proptest! {
        #[test]
        fn identical_inputs_project_to_singlet(t in table_strategy()) {
            let p = bsm_project(&t, &t);
            prop_assert_eq!(p.state.up_up(), c(0.0));
            prop_assert_eq!(p.state.down_down(), c(0.0));
            prop_assert_eq!(p.state.up_down(), -p.state.down_up());
            if p.success_prob > DEFAULT_EPS_BSM {
                let s = p.state.normalize().unwrap();
                prop_assert!((concurrence_pure(&s).unwrap() - 1.0).abs() <= 1e-12);
            }
        }

        #[test]
        fn exchange_and_phase_symmetry(t1 in table_strategy(), t2 in table_strategy(), phi in 0.0f64..6.3) {
            let (t1, t2) = same_len(t1, t2);
            let fwd = SwapOutcome::from_tables(&t1, &t2, DEFAULT_EPS_BSM).unwrap();
            let rev = SwapOutcome::from_tables(&t2, &t1, DEFAULT_EPS_BSM).unwrap();
            let p1 = bsm_project(&t1, &t2).state;
            let p2 = bsm_project(&t2, &t1).state;
            prop_assert_eq!(p2.up_down(), -p1.down_up());
            prop_assert_eq!(p2.up_up(), -p1.up_up());
            prop_assert_eq!(p2.down_down(), -p1.down_down());
            prop_assert!((fwd.success_prob - rev.success_prob).abs() <= 1e-15);
            let phase = C64::from_polar(1.0, phi);
            let ph = SwapOutcome::from_tables(&t1.scaled(phase), &t2, DEFAULT_EPS_BSM).unwrap();
            prop_assert!((fwd.success_prob - ph.success_prob).abs() <= 1e-14);
            if let (Some(a), Some(b), Some(c)) = (fwd.concurrence, rev.concurrence, ph.concurrence) {
                prop_assert!((a - b).abs() <= 1e-12);
                prop_assert!((a - c).abs() <= 1e-12);
                prop_assert!((0.0..=1.0).contains(&a));
            }
        }

        #[test]
        fn only_zero_and_one_photon_levels_matter(t1 in table_strategy(), t2 in table_strategy()) {
            let (t1, t2) = same_len(t1, t2);
            let full = bsm_project(&t1, &t2);
            let cut = bsm_project(&t1.truncated(2), &t2.truncated(2));
            prop_assert_eq!(full, cut);
        }

        #[test]
        fn concurrence_forms_agree(amps in prop::array::uniform4(complex())) {
            prop_assume!(amps.iter().map(|z| z.norm()).sum::<f64>() > 1e-3);
            let s = TwoQubitState::normalized_from(amps).unwrap();
            let det = concurrence_pure(&s).unwrap();
            let magic = concurrence_magic_basis(&s).unwrap();
            let flip = concurrence_spin_flip(&s).unwrap();
            prop_assert!((det - magic).abs() <= 1e-12);
            prop_assert!((det - flip).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&det));
        }
    }
}
