//! Dense simulator for digital open-system quantum simulation with trapped
//! ions.
//!
//! The crate builds Mølmer–Sørensen gate circuits that realize many-body
//! coherent evolution and stabilizer pumping, checks each circuit against an
//! exact matrix oracle, and evolves states under the resulting Kraus maps and
//! Lindblad equations.
//!
//! Conventions used throughout:
//! - qubit 0 is the ancilla; system qubit `j` sits on register qubit `j + 1`;
//! - bit `q` of a basis index is the state of qubit `q`;
//! - local rotations are `R(axis, a) = exp(−i a σ_axis / 2)`;
//! - `|y±⟩ = (|0⟩ ± i|1⟩)/√2`.

pub mod channels;
pub mod circuits;
pub mod error;
pub mod experiment;
pub mod gates;
pub(crate) mod kernel;
pub mod linalg;
pub mod models;
pub mod noise;
pub mod qstate;

pub use error::{Error, Result};
pub use linalg::{Operator, C64};
pub use qstate::{DensityMatrix, Expectation, Pauli, PauliString, Phase, Register, StateVector};
