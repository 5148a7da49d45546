//! Pure and mixed states of a qubit register plus Pauli-string algebra.
//!
//! Bit `q` of a basis index is the state of qubit `q`. Qubit 0 is the ancilla
//! wherever an ancilla is present.

mod density;
mod pauli;
mod state;

pub use density::{DensityMatrix, MAX_MIXED_QUBITS};
pub use pauli::{Pauli, PauliString, Phase};
pub use state::{StateVector, MAX_PURE_QUBITS};

use crate::kernel::{Mat2, Mat4};
use crate::linalg::C64;

/// Anything a unitary can act on: gates are written once against this trait.
pub trait Register {
    fn num_qubits(&self) -> usize;
    fn apply_1q(&mut self, qubit: usize, m: &Mat2);
    fn apply_2q(&mut self, a: usize, b: usize, m: &Mat4);
    /// Multiply by a diagonal unitary given as a function of the basis index.
    fn apply_diagonal(&mut self, phase: &dyn Fn(usize) -> C64);
}

/// Expectation values of Hermitian Pauli strings, for pure or mixed states.
pub trait Expectation {
    fn expectation_of(&self, p: &PauliString) -> crate::error::Result<f64>;
}

impl Expectation for StateVector {
    fn expectation_of(&self, p: &PauliString) -> crate::error::Result<f64> {
        self.expectation(p)
    }
}

impl Expectation for DensityMatrix {
    fn expectation_of(&self, p: &PauliString) -> crate::error::Result<f64> {
        self.expectation(p)
    }
}
