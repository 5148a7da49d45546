//! Coherent and dissipative many-body blocks built from two MS gates.
//!
//! Stabilizers are given on system qubits; system qubit `j` is register
//! qubit `j + 1` and the ancilla is register qubit 0.

use std::f64::consts::FRAC_PI_2;

use super::Circuit;
use crate::error::{Error, Result};
use crate::gates::{correcting_gate, local_rotation, Axis, CorrectionRow, GateOp};
use crate::qstate::{Pauli, PauliString, Phase};

/// Which MS phase maps the stabilizer onto the ancilla.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// φ_MS = 0, stabilizer factors rotated to σx.
    XType,
    /// φ_MS = π/2, every factor is σy.
    YType,
}

/// Ancilla rotation realizing the middle step for `n` mapped qubits.
///
/// | n mod 4 | x-type       | y-type       |
/// |---------|--------------|--------------|
/// | 1       | R(y, 2φ)     | R(x, −2φ)    |
/// | 2       | R(z, 2φ)     | R(z, 2φ)     |
/// | 3       | R(y, −2φ)    | R(x, 2φ)     |
/// | 0       | R(z, −2φ)    | R(z, −2φ)    |
pub fn ancilla_rotation(kind: BlockKind, n: usize, phi: f64, ancilla: usize) -> Result<GateOp> {
    let (axis, sign) = match (kind, CorrectionRow::for_weight(n)?) {
        (BlockKind::XType, CorrectionRow::Row1) => (Axis::Y, 1.0),
        (BlockKind::XType, CorrectionRow::Row3) => (Axis::Y, -1.0),
        (BlockKind::YType, CorrectionRow::Row1) => (Axis::X, -1.0),
        (BlockKind::YType, CorrectionRow::Row3) => (Axis::X, 1.0),
        (_, CorrectionRow::Row2) => (Axis::Z, 1.0),
        (_, CorrectionRow::Row4) => (Axis::Z, -1.0),
    };
    Ok(local_rotation(axis, sign * 2.0 * phi, ancilla))
}

struct Plan {
    kind: BlockKind,
    /// Register indices of the mapped system qubits.
    support: Vec<usize>,
    /// (register qubit, rotation into the σx frame, rotation back).
    frame: Vec<(usize, GateOp, GateOp)>,
    /// +1 or −1 from the string's phase.
    sign: f64,
}

impl Plan {
    fn ms_phi(&self) -> f64 {
        match self.kind {
            BlockKind::XType => 0.0,
            BlockKind::YType => FRAC_PI_2,
        }
    }

    fn targets(&self, ancilla: usize) -> Vec<usize> {
        let mut t = vec![ancilla];
        t.extend(&self.support);
        t
    }
}

/// `offset` is the register index of system qubit 0.
fn plan(stabilizer: &PauliString, offset: usize, allow_y_type: bool) -> Result<Plan> {
    let sign = match stabilizer.phase() {
        Phase::PLUS => 1.0,
        Phase::MINUS => -1.0,
        _ => return Err(Error::Domain(format!("{stabilizer} is not Hermitian"))),
    };
    let support = stabilizer.support();
    if support.is_empty() {
        return Err(Error::Domain("stabilizer has weight 0".into()));
    }
    let all_y = support.iter().all(|&q| stabilizer.factor(q) == Pauli::Y);
    let kind = if allow_y_type && all_y { BlockKind::YType } else { BlockKind::XType };
    let mut frame = Vec::new();
    if kind == BlockKind::XType {
        for &q in &support {
            let r = q + offset;
            // V σx V† = factor; V† runs first
            match stabilizer.factor(q) {
                Pauli::Z => frame.push((
                    r,
                    local_rotation(Axis::Y, FRAC_PI_2, r),
                    local_rotation(Axis::Y, -FRAC_PI_2, r),
                )),
                Pauli::Y => frame.push((
                    r,
                    local_rotation(Axis::Z, -FRAC_PI_2, r),
                    local_rotation(Axis::Z, FRAC_PI_2, r),
                )),
                _ => {}
            }
        }
    }
    Ok(Plan {
        kind,
        support: support.iter().map(|q| q + offset).collect(),
        frame,
        sign,
    })
}

fn sandwich(c: &mut Circuit, plan: &Plan, ancilla: usize, middle: &[GateOp]) -> Result<()> {
    for (_, into, _) in &plan.frame {
        c.push(into.clone())?;
    }
    let targets = plan.targets(ancilla);
    c.push(GateOp::ms(&targets, FRAC_PI_2, plan.ms_phi()))?;
    for op in middle {
        c.push(op.clone())?;
    }
    c.push(GateOp::ms(&targets, -FRAC_PI_2, plan.ms_phi()))?;
    for (_, _, back) in &plan.frame {
        c.push(back.clone())?;
    }
    Ok(())
}

/// exp(iφA) on the system with the ancilla returned to |0⟩; the full
/// register unitary is exp(iφ σz₀ ⊗ A).
pub fn coherent_block(stabilizer: &PauliString, phi: f64) -> Result<Circuit> {
    let p = plan(stabilizer, 1, true)?;
    let n = p.support.len();
    let mut c = Circuit::new(stabilizer.num_qubits() + 1)
        .with_target(format!("exp(i {phi} sz0 (x) {stabilizer})"));
    let rot = ancilla_rotation(p.kind, n, p.sign * phi, 0)?;
    sandwich(&mut c, &p, 0, &[rot])?;
    Ok(c)
}

/// exp(iφA) for an X-type string using the first support qubit in place of
/// an ancilla; acts on the system register alone.
pub fn coherent_block_ancilla_free(stabilizer: &PauliString, phi: f64) -> Result<Circuit> {
    let support = stabilizer.support();
    if support.len() < 2 {
        return Err(Error::Domain("ancilla-free block needs weight >= 2".into()));
    }
    if support.iter().any(|&q| stabilizer.factor(q) != Pauli::X) {
        return Err(Error::Domain(format!("{stabilizer} is not X-type")));
    }
    let n_sys = stabilizer.num_qubits();
    let lead = support[0];
    // the rest of the string, with `lead` acting as the ancilla
    let mut rest = stabilizer.clone();
    rest = rest.mul(&PauliString::single(n_sys, lead, Pauli::X)?)?;
    let p = plan(&rest, 0, false)?;
    let mut c = Circuit::new(n_sys).with_target(format!("exp(i {phi} {stabilizer})"));
    // σz on the lead qubit is rotated onto σx
    c.push(local_rotation(Axis::Y, -FRAC_PI_2, lead))?;
    let rot = ancilla_rotation(p.kind, p.support.len(), p.sign * phi, lead)?;
    sandwich(&mut c, &p, lead, &[rot])?;
    c.push(local_rotation(Axis::Y, FRAC_PI_2, lead))?;
    Ok(c)
}

/// Pump block: MS, controlled flip on `flip_qubit`, inverse MS, reset of the
/// ancilla. `flip_qubit` is a system index in the stabilizer's support.
pub fn dissipative_block(stabilizer: &PauliString, theta: f64, flip_qubit: usize) -> Result<Circuit> {
    if flip_qubit >= stabilizer.num_qubits() || stabilizer.factor(flip_qubit) == Pauli::I {
        return Err(Error::Domain(format!(
            "flip qubit {flip_qubit} is outside the support of {stabilizer}"
        )));
    }
    let p = plan(stabilizer, 1, false)?;
    let row = CorrectionRow::for_weight(p.support.len())?;
    // a −1 sign swaps the roles of the eigenspaces: pump with the other branch
    let (row, theta) = if p.sign < 0.0 { (partner_row(row), -theta) } else { (row, theta) };
    let mut c = Circuit::new(stabilizer.num_qubits() + 1).with_target(format!(
        "pump {stabilizer}, theta {theta}, flip on system qubit {flip_qubit}"
    ));
    let gate = correcting_gate(row, theta, flip_qubit + 1)?;
    sandwich(&mut c, &p, 0, &[gate])?;
    c.push(GateOp::Reset { qubit: 0 })?;
    Ok(c)
}

fn partner_row(row: CorrectionRow) -> CorrectionRow {
    match row {
        CorrectionRow::Row1 => CorrectionRow::Row3,
        CorrectionRow::Row2 => CorrectionRow::Row4,
        CorrectionRow::Row3 => CorrectionRow::Row1,
        CorrectionRow::Row4 => CorrectionRow::Row2,
    }
}

/// The flip operator that `dissipative_block` applies on `flip_qubit`, up to
/// sign: σz for σx/σy factors, σx for a σz factor.
pub fn realized_flip(stabilizer: &PauliString, flip_qubit: usize) -> Result<PauliString> {
    let p = match stabilizer.factor(flip_qubit) {
        Pauli::I => {
            return Err(Error::Domain(format!(
                "flip qubit {flip_qubit} is outside the support of {stabilizer}"
            )))
        }
        Pauli::Z => Pauli::X,
        _ => Pauli::Z,
    };
    PauliString::single(stabilizer.num_qubits(), flip_qubit, p)
}
