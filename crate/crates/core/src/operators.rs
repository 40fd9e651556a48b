//! Operator matrices on the qubit ⊗ truncated-Fock product space.
//!
//! The qubit is the outer tensor factor: basis index `q * n_fock + n`, with
//! `q = 0` the ground state |↑⟩ and `q = 1` the excited state |↓⟩.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::params::{Model, SubsystemParams};
use crate::C64;

/// Dense complex square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    matrix: DMatrix<C64>,
    hermitian: bool,
}

impl OperatorMatrix {
    /// Wraps `matrix`. When `hermitian` is set the claim is checked against
    /// the relative tolerance 1e-12.
    pub fn new(matrix: DMatrix<C64>, hermitian: bool) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::ContractViolation(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let op = Self { matrix, hermitian };
        if hermitian && op.hermiticity_defect() > 1e-12 * op.max_abs() {
            return Err(Error::ContractViolation(
                "matrix flagged Hermitian is not Hermitian".into(),
            ));
        }
        Ok(op)
    }

    pub(crate) fn from_parts(matrix: DMatrix<C64>, hermitian: bool) -> Self {
        Self { matrix, hermitian }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |M − M†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.matrix;
        let n = m.nrows();
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        defect
    }

    /// Frobenius norm of the commutator [self, other].
    pub fn commutator_norm(&self, other: &OperatorMatrix) -> f64 {
        (&self.matrix * &other.matrix - &other.matrix * &self.matrix).norm()
    }

    /// Expectation value ⟨ψ|M|ψ⟩ for an amplitude vector of matching length.
    pub fn expectation(&self, amps: &nalgebra::DVector<C64>) -> C64 {
        amps.dotc(&(&self.matrix * amps))
    }
}

fn real_matrix(n: usize, f: impl Fn(usize, usize) -> f64) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |i, j| C64::new(f(i, j), 0.0))
}

/// Truncated annihilation operator on the Fock factor alone (n_fock × n_fock):
/// ⟨n−1|a|n⟩ = √n.
pub fn build_annihilation(n_fock: usize) -> Result<OperatorMatrix> {
    if n_fock < 2 {
        return Err(Error::InvalidDimension(n_fock));
    }
    let a = real_matrix(
        n_fock,
        |i, j| {
            if j == i + 1 {
                (j as f64).sqrt()
            } else {
                0.0
            }
        },
    );
    Ok(OperatorMatrix::from_parts(a, false))
}

// Qubit operators in the (|↑⟩, |↓⟩) basis.

/// σ_z signed so that the excited state |↓⟩ has eigenvalue +1.
fn sigma_z() -> DMatrix<C64> {
    real_matrix(2, |i, j| match (i, j) {
        (0, 0) => -1.0,
        (1, 1) => 1.0,
        _ => 0.0,
    })
}

fn sigma_x() -> DMatrix<C64> {
    real_matrix(2, |i, j| if i != j { 1.0 } else { 0.0 })
}

/// σ⁺ = |↓⟩⟨↑|, raising ground to excited.
fn sigma_plus() -> DMatrix<C64> {
    real_matrix(2, |i, j| if (i, j) == (1, 0) { 1.0 } else { 0.0 })
}

fn identity(n: usize) -> DMatrix<C64> {
    DMatrix::identity(n, n)
}

/// Subsystem Hamiltonian H = H_Q + H_C + H_int on the 2·n_fock space.
///
/// H_Q = c Ω σ_z, H_C = ω (a†a + ½), and H_int is g σ_x (a + a†) for the
/// Rabi model or g (σ⁺a + σ⁻a†) for Jaynes-Cummings. Couplings out of the
/// top retained level are dropped.
pub fn build_hamiltonian(p: &SubsystemParams) -> Result<OperatorMatrix> {
    p.validate()?;
    let n = p.n_fock;
    let a = build_annihilation(n)?.into_matrix();
    let a_dag = a.adjoint();
    let num = &a_dag * &a;

    let c = p.qubit_convention.prefactor();
    let h_q = (sigma_z() * C64::from(c * p.qubit_freq)).kronecker(&identity(n));
    let h_c =
        identity(2).kronecker(&((num + identity(n) * C64::from(0.5)) * C64::from(p.cavity_freq)));
    let g = C64::from(p.coupling);
    let h_int = match p.model {
        Model::Rabi => sigma_x().kronecker(&(&a + &a_dag)) * g,
        Model::Jc => {
            let sp = sigma_plus();
            let sm = sp.transpose();
            (sp.kronecker(&a) + sm.kronecker(&a_dag)) * g
        }
    };
    Ok(OperatorMatrix::from_parts(h_q + h_c + h_int, true))
}

/// Parity operator: qubit sign ⊗ (−1)^{a†a}, with the ground-qubit,
/// zero-photon state at +1.
///
/// The qubit factor is +1 on |↑⟩ and −1 on |↓⟩, i.e. −σ_z in the energy
/// sign convention of [`build_hamiltonian`]. An overall sign does not affect
/// the commutation with the Rabi Hamiltonian.
pub fn build_parity(n_fock: usize) -> Result<OperatorMatrix> {
    if n_fock < 2 {
        return Err(Error::InvalidDimension(n_fock));
    }
    let dim = 2 * n_fock;
    let m = real_matrix(dim, |i, j| {
        if i != j {
            return 0.0;
        }
        let (q, n) = (i / n_fock, i % n_fock);
        let qubit_sign = if q == 0 { 1.0 } else { -1.0 };
        let photon_sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        qubit_sign * photon_sign
    });
    Ok(OperatorMatrix::from_parts(m, true))
}

/// Total excitation number σ⁺σ⁻ ⊗ 1 + 1 ⊗ a†a, conserved by the JC model.
pub fn build_excitation_number(n_fock: usize) -> Result<OperatorMatrix> {
    if n_fock < 2 {
        return Err(Error::InvalidDimension(n_fock));
    }
    let m = real_matrix(2 * n_fock, |i, j| {
        if i != j {
            return 0.0;
        }
        let (q, n) = (i / n_fock, i % n_fock);
        (q + n) as f64
    });
    Ok(OperatorMatrix::from_parts(m, true))
}
