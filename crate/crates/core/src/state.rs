//! State vectors on the qubit ⊗ Fock space.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::C64;

/// Ground qubit state |↑⟩.
pub const UP: usize = 0;
/// Excited qubit state |↓⟩.
pub const DOWN: usize = 1;

/// Amplitudes over the 2·n_fock product basis, index `q * n_fock + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_fock: usize,
    amps: DVector<C64>,
}

impl StateVector {
    pub fn from_amplitudes(n_fock: usize, amps: DVector<C64>) -> Result<Self> {
        if n_fock < 2 {
            return Err(Error::InvalidDimension(n_fock));
        }
        if amps.len() != 2 * n_fock {
            return Err(Error::DimensionMismatch {
                expected: 2 * n_fock,
                got: amps.len(),
            });
        }
        Ok(Self { n_fock, amps })
    }

    /// Basis state |q, n⟩.
    pub fn basis(n_fock: usize, q: usize, n: usize) -> Result<Self> {
        if q > 1 || n >= n_fock {
            return Err(Error::InvalidState(format!(
                "basis state (q = {q}, n = {n}) outside a space with {n_fock} Fock levels"
            )));
        }
        let mut amps = DVector::zeros(2 * n_fock);
        amps[q * n_fock + n] = C64::from(1.0);
        Self::from_amplitudes(n_fock, amps)
    }

    pub fn n_fock(&self) -> usize {
        self.n_fock
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amps
    }

    pub fn amplitude(&self, q: usize, n: usize) -> C64 {
        self.amps[q * self.n_fock + n]
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Total population in Fock levels `n >= level`.
    pub fn population_from_level(&self, level: usize) -> f64 {
        (0..2)
            .flat_map(|q| (level..self.n_fock).map(move |n| (q, n)))
            .map(|(q, n)| self.amplitude(q, n).norm_sqr())
            .sum()
    }

    /// Re-expresses the state with `n_fock` levels: zero-padded when growing,
    /// cut (without renormalizing) when shrinking.
    pub fn resized(&self, n_fock: usize) -> Result<StateVector> {
        if n_fock < 2 {
            return Err(Error::InvalidDimension(n_fock));
        }
        let keep = n_fock.min(self.n_fock);
        let mut amps = DVector::zeros(2 * n_fock);
        for q in 0..2 {
            for n in 0..keep {
                amps[q * n_fock + n] = self.amplitude(q, n);
            }
        }
        Ok(Self { n_fock, amps })
    }

    pub fn normalized(&self) -> Result<StateVector> {
        let norm = self.norm();
        if !(norm > 0.0) {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            n_fock: self.n_fock,
            amps: &self.amps / C64::from(norm),
        })
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scaled(&self, factor: C64) -> StateVector {
        Self {
            n_fock: self.n_fock,
            amps: &self.amps * factor,
        }
    }
}

/// Normalized product state (Σ_s γ_s|s⟩) ⊗ (Σ_n β_n|n⟩).
///
/// `qubit_amps` is ordered (|↑⟩, |↓⟩); `photon_amps[n]` is the weight of |n⟩
/// and may be shorter than `n_fock`.
pub fn make_initial_state(
    qubit_amps: [C64; 2],
    photon_amps: &[C64],
    n_fock: usize,
) -> Result<StateVector> {
    if n_fock < 2 {
        return Err(Error::InvalidDimension(n_fock));
    }
    if photon_amps.len() > n_fock {
        return Err(Error::InvalidState(format!(
            "{} photon amplitudes do not fit in {n_fock} Fock levels",
            photon_amps.len()
        )));
    }
    let qubit_norm = qubit_amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let photon_norm = photon_amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(qubit_norm > 0.0) || !qubit_norm.is_finite() {
        return Err(Error::InvalidState(
            "qubit factor has no nonzero amplitude".into(),
        ));
    }
    if !(photon_norm > 0.0) || !photon_norm.is_finite() {
        return Err(Error::InvalidState(
            "photon factor has no nonzero amplitude".into(),
        ));
    }
    let mut amps = DVector::zeros(2 * n_fock);
    for (q, gamma) in qubit_amps.iter().enumerate() {
        for (n, beta) in photon_amps.iter().enumerate() {
            amps[q * n_fock + n] = (gamma / qubit_norm) * (beta / photon_norm);
        }
    }
    StateVector::from_amplitudes(n_fock, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::from(re)
    }

    #[test]
    fn excited_vacuum_is_exact() {
        let s = make_initial_state([c(0.0), c(1.0)], &[c(1.0)], 10).unwrap();
        assert_eq!(s, StateVector::basis(10, DOWN, 0).unwrap());
    }

    #[test]
    fn two_photon_superposition() {
        let s = make_initial_state([c(0.0), c(1.0)], &[c(1.0), c(1.0)], 10).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(DOWN, 0) - c(h)).norm() < 1e-15);
        assert!((s.amplitude(DOWN, 1) - c(h)).norm() < 1e-15);
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_factors() {
        assert!(make_initial_state([c(0.0), c(0.0)], &[c(1.0)], 4).is_err());
        assert!(make_initial_state([c(1.0), c(0.0)], &[c(0.0), c(0.0)], 4).is_err());
        assert!(make_initial_state([c(1.0), c(0.0)], &[], 4).is_err());
        assert!(make_initial_state([c(1.0), c(0.0)], &[c(1.0); 5], 4).is_err());
        assert!(make_initial_state([c(1.0), c(0.0)], &[c(1.0)], 1).is_err());
    }

    #[test]
    fn resize_pads_and_cuts() {
        let s = make_initial_state([c(0.0), c(1.0)], &[c(1.0); 4], 4).unwrap();
        let big = s.resized(8).unwrap();
        assert_eq!(big.norm(), s.norm());
        assert_eq!(big.amplitude(DOWN, 3), s.amplitude(DOWN, 3));
        let small = s.resized(2).unwrap();
        assert!((small.norm().powi(2) - 0.5).abs() < 1e-15);
        assert!((s.population_from_level(2) - 0.5).abs() < 1e-15);
    }

    fn complex_strategy() -> impl Strategy<Value = C64> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
    }

    proptest! {
        #[test]
        fn product_state_is_normalized_and_rank_one(
            q0 in complex_strategy(),
            q1 in complex_strategy(),
            photons in prop::collection::vec(complex_strategy(), 1..8),
            extra in 0usize..4,
        ) {
            prop_assume!(q0.norm() + q1.norm() > 1e-3);
            prop_assume!(photons.iter().map(|z| z.norm()).sum::<f64>() > 1e-3);
            let n_fock = (photons.len() + extra).max(2);
            let s = make_initial_state([q0, q1], &photons, n_fock).unwrap();
            prop_assert!((s.norm() - 1.0).abs() <= 1e-12);
            // 2 x n_fock amplitude matrix has a single nonzero singular value
            let m = DMatrix::from_fn(2, n_fock, |q, n| s.amplitude(q, n));
            let sv = m.singular_values();
            prop_assert!((sv[0] - 1.0).abs() <= 1e-12);
            prop_assert!(sv[1] <= 1e-12);
        }
    }
}
