//! Stabilizer readout through the ancilla.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use rand::Rng;

use super::{coherent_block, Circuit};
use crate::error::{Error, Result};
use crate::gates::{local_rotation, Axis};
use crate::linalg::C64;
use crate::qstate::{PauliString, StateVector};

/// Ancilla to |+⟩, then exp(iπ/4 σz₀ ⊗ A). Afterwards the ancilla is in
/// |y−⟩ on the A = +1 eigenspace and in |y+⟩ on A = −1.
pub fn qnd_readout(stabilizer: &PauliString) -> Result<Circuit> {
    let block = coherent_block(stabilizer, FRAC_PI_4)?;
    let mut c = Circuit::new(block.num_qubits()).with_target(format!("readout of {stabilizer}"));
    c.push(local_rotation(Axis::Y, FRAC_PI_2, 0))?;
    c.append(&block)?;
    Ok(c)
}

/// Born-rule measurement of σy on qubit 0. Returns the σy eigenvalue and the
/// collapsed, renormalized state.
pub fn measure_ancilla_y<R: Rng + ?Sized>(state: &StateVector, rng: &mut R) -> Result<(i8, StateVector)> {
    let h = FRAC_1_SQRT_2;
    let y_plus = [C64::new(h, 0.0), C64::new(0.0, h)];
    let y_minus = [C64::new(h, 0.0), C64::new(0.0, -h)];
    let mut plus = state.clone();
    let p_plus = plus.project_qubit(0, y_plus);
    let draw: f64 = rng.random();
    if draw < p_plus {
        return Ok((1, plus));
    }
    let mut minus = state.clone();
    let p_minus = minus.project_qubit(0, y_minus);
    if p_minus <= 0.0 {
        return Err(Error::Domain("measurement branch has zero probability".into()));
    }
    Ok((-1, minus))
}

/// Full QND cycle on a register whose qubit 0 is the ancilla: reset the
/// ancilla, run the readout circuit, measure. Returns the stabilizer
/// eigenvalue (+1 or −1) and the post-measurement state.
pub fn read_stabilizer<R: Rng + ?Sized>(
    state: &StateVector,
    stabilizer: &PauliString,
    rng: &mut R,
) -> Result<(i8, StateVector)> {
    let circuit = qnd_readout(stabilizer)?;
    let mut psi = state.clone();
    psi.reset_qubit(0, rng);
    circuit.apply_to_state(&mut psi, rng)?;
    let (y, collapsed) = measure_ancilla_y(&psi, rng)?;
    Ok((-y, collapsed))
}
