use super::{LindbladTerm, MasterEquation};
use crate::circuits::{coherent_block, dissipative_block, realized_flip, refocus_subset_gates, Circuit};
use crate::error::{Error, Result};
use crate::linalg;
use crate::qstate::{DensityMatrix, PauliString};

/// Circuit realization of a pump term: the stabilizer and the system qubit
/// carrying the flip.
#[derive(Debug, Clone, PartialEq)]
pub struct PumpRealization {
    pub stabilizer: PauliString,
    pub flip_qubit: usize,
}

/// Registered realizations for the Lindblad terms of one equation, indexed
/// like `MasterEquation::lindblad_terms`. Hamiltonian terms are always
/// realized by the coherent block of their string.
#[derive(Debug, Clone, Default)]
pub struct Realizations {
    pumps: Vec<Option<PumpRealization>>,
    /// Build subset MS gates from global ones.
    pub refocus: bool,
}

impl Realizations {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register `pump` for Lindblad term `index`, checking that the block's
    /// jump operator matches the term's up to sign.
    pub fn register(&mut self, eq: &MasterEquation, index: usize, pump: PumpRealization) -> Result<()> {
        let term = eq
            .lindblad_terms
            .get(index)
            .ok_or_else(|| Error::Domain(format!("no Lindblad term {index}")))?;
        let flip = realized_flip(&pump.stabilizer, pump.flip_qubit)?;
        let expected = LindbladTerm::pump(&pump.stabilizer, &flip, term.rate)?.jump;
        if expected.shape() != term.jump.shape() {
            return Err(Error::QubitMismatch {
                expected: linalg::num_qubits_for_dim(term.jump.nrows())?,
                found: pump.stabilizer.num_qubits(),
            });
        }
        let dev = linalg::max_abs_diff(&expected, &term.jump).min(linalg::max_abs_diff(&(-&expected), &term.jump));
        if dev > 1e-12 {
            return Err(Error::Domain(format!(
                "pump {} with flip on {} does not realize Lindblad term {index}",
                pump.stabilizer, pump.flip_qubit
            )));
        }
        if self.pumps.len() <= index {
            self.pumps.resize(index + 1, None);
        }
        self.pumps[index] = Some(pump);
        Ok(())
    }

    pub fn pump(&self, index: usize) -> Option<&PumpRealization> {
        self.pumps.get(index).and_then(Option::as_ref)
    }

    fn finish(&self, c: Circuit) -> Result<Circuit> {
        if self.refocus {
            refocus_subset_gates(&c)
        } else {
            Ok(c)
        }
    }
}

/// One first-order Trotter step of length τ: every coherent block with
/// φ = −E·τ, then every pump block with θ = √(γτ), run as circuits on the
/// system plus a fresh ancilla that is traced out at the end.
pub fn trotter_step(
    rho: &DensityMatrix,
    eq: &MasterEquation,
    tau: f64,
    realizations: &Realizations,
) -> Result<DensityMatrix> {
    if let Some(n) = eq.num_qubits()? {
        if n != rho.num_qubits() {
            return Err(Error::QubitMismatch { expected: n, found: rho.num_qubits() });
        }
    }
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("tau must be non-negative, got {tau}")));
    }
    let n = rho.num_qubits();
    let mut ext = DensityMatrix::zero(1)?.tensor(rho)?;
    for term in &eq.hamiltonian_terms {
        if term.string.weight() == 0 {
            continue; // global phase
        }
        let c = coherent_block(&term.string, -term.coefficient * tau)?;
        realizations.finish(c)?.apply_to_density(&mut ext)?;
    }
    for (i, term) in eq.lindblad_terms.iter().enumerate() {
        let pump = realizations
            .pump(i)
            .ok_or_else(|| Error::Domain(format!("no circuit realization registered for Lindblad term {i}")))?;
        let theta = (term.rate * tau).sqrt();
        let c = dissipative_block(&pump.stabilizer, theta, pump.flip_qubit)?;
        realizations.finish(c)?.apply_to_density(&mut ext)?;
    }
    let keep: Vec<usize> = (1..=n).collect();
    ext.partial_trace(&keep)
}
