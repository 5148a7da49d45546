//! MS gates on subsets of ions from global MS gates plus single-ion π flips,
//! and the decomposition of the controlled correcting gates.

use std::f64::consts::{FRAC_PI_2, PI};

use super::Circuit;
use crate::error::{Error, Result};
use crate::gates::{backward_ms_as_forward, local_rotation, Axis, CorrectionRow, GateOp};

fn flip(q: usize) -> GateOp {
    local_rotation(Axis::Z, PI, q)
}

fn all(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn check_ions(num_ions: usize, min: usize) -> Result<()> {
    if num_ions < min {
        return Err(Error::Domain(format!("needs at least {min} ions, got {num_ions}")));
    }
    Ok(())
}

/// MS(θ, φ) on every ion except `excluded`: two half-angle global gates with
/// the excluded ion flipped in between.
pub fn refocused_ms_excluding(excluded: usize, theta: f64, phi: f64, num_ions: usize) -> Result<Circuit> {
    check_ions(num_ions, 3)?;
    if excluded >= num_ions {
        return Err(Error::QubitOutOfRange { qubit: excluded, num_qubits: num_ions });
    }
    let mut c = Circuit::new(num_ions).with_target(format!("MS({theta}, {phi}) on all ions but {excluded}"));
    for _ in 0..2 {
        c.push(GateOp::ms(&all(num_ions), theta / 2.0, phi))?;
        c.push(flip(excluded))?;
    }
    Ok(c)
}

/// ∏ᵢ MS⁽⁰ⁱ⁾(θ, φ): ancilla 0 entangled with each other ion, no coupling
/// among the others. The inverse half gate is written with forward gates.
pub fn star_ms(theta: f64, phi: f64, num_ions: usize) -> Result<Circuit> {
    check_ions(num_ions, 3)?;
    let mut c = Circuit::new(num_ions).with_target(format!("star MS({theta}, {phi}) around ion 0"));
    c.push(GateOp::ms(&all(num_ions), theta / 2.0, phi))?;
    c.push(flip(0))?;
    c.append(&backward_ms_as_forward(theta / 2.0, phi, &all(num_ions), num_ions)?)?;
    c.push(flip(0))?;
    Ok(c)
}

/// MS⁽⁰ⁱ⁾(θ, φ) from four quarter-angle global gates and four π flips.
pub fn two_ion_ms_via_refocus(i: usize, theta: f64, phi: f64, num_ions: usize) -> Result<Circuit> {
    check_ions(num_ions, 2)?;
    if i == 0 || i >= num_ions {
        return Err(Error::Domain(format!("partner ion {i} must be in 1..{num_ions}")));
    }
    let mut c = Circuit::new(num_ions).with_target(format!("MS({theta}, {phi}) on ions 0,{i}"));
    for _ in 0..2 {
        c.push(GateOp::ms(&all(num_ions), theta / 4.0, phi))?;
        c.push(flip(0))?;
        c.push(GateOp::ms(&all(num_ions), -theta / 4.0, phi))?;
        c.push(flip(i))?;
    }
    Ok(c)
}

/// Two-ion MS on (0, i), either direct or through the refocused sequence.
fn pair_ms(i: usize, theta: f64, num_qubits: usize, refocus: bool) -> Result<Circuit> {
    if refocus && num_qubits > 2 {
        two_ion_ms_via_refocus(i, theta, FRAC_PI_2, num_qubits)
    } else {
        let mut c = Circuit::new(num_qubits);
        c.push(GateOp::ms(&[0, i], theta, FRAC_PI_2))?;
        Ok(c)
    }
}

/// The controlled correcting gate C[row](θ) between ancilla 0 and
/// `flip_qubit`, written as one two-ion MS gate plus local rotations.
///
/// Rows 4 and 2 use exp(−iθ/2 σz₀σyᵢ) = Rx₀(π/2) MS⁽⁰ⁱ⁾(θ, π/2) Rx₀(−π/2)
/// followed by Ry(∓θ) on the target. Rows 1 and 3 rotate the same core by
/// Rxᵢ(±π/2) so that it couples σy₀σzᵢ, followed by Rz(θ) on the target.
pub fn decompose_correcting_gate(
    row: CorrectionRow,
    theta: f64,
    flip_qubit: usize,
    num_qubits: usize,
    refocus: bool,
) -> Result<Circuit> {
    if flip_qubit == 0 || flip_qubit >= num_qubits {
        return Err(Error::Domain(format!("flip qubit {flip_qubit} must be in 1..{num_qubits}")));
    }
    let i = flip_qubit;
    let mut c = Circuit::new(num_qubits).with_target(format!("C[{}]({theta}; 0, {i})", row.index()));
    match row {
        CorrectionRow::Row4 | CorrectionRow::Row2 => {
            c.push(local_rotation(Axis::X, -FRAC_PI_2, 0))?;
            c.append(&pair_ms(i, theta, num_qubits, refocus)?)?;
            c.push(local_rotation(Axis::X, FRAC_PI_2, 0))?;
            let sign = if row == CorrectionRow::Row4 { -1.0 } else { 1.0 };
            c.push(local_rotation(Axis::Y, sign * theta, i))?;
        }
        CorrectionRow::Row1 | CorrectionRow::Row3 => {
            let ms_theta = if row == CorrectionRow::Row1 { theta } else { -theta };
            c.push(local_rotation(Axis::X, -FRAC_PI_2, i))?;
            c.append(&pair_ms(i, ms_theta, num_qubits, refocus)?)?;
            c.push(local_rotation(Axis::X, FRAC_PI_2, i))?;
            c.push(local_rotation(Axis::Z, theta, i))?;
        }
    }
    Ok(c)
}

/// Replace every MS gate on a proper subset of the register by global MS
/// gates and π flips. Pairs that include qubit 0 use the four-gate
/// quarter-angle sequence; other subsets exclude ions one at a time.
pub fn refocus_subset_gates(circuit: &Circuit) -> Result<Circuit> {
    let n = circuit.num_qubits();
    let mut out = Circuit::new(n).with_target(circuit.target().to_string());
    for op in circuit.ops() {
        match op {
            GateOp::Ms { targets, theta, phi } if targets.len() < n => {
                if targets.len() == 2 && targets[0] == 0 && n > 2 {
                    out.append(&two_ion_ms_via_refocus(targets[1], *theta, *phi, n)?)?;
                } else {
                    let excluded: Vec<usize> = (0..n).filter(|q| !targets.contains(q)).collect();
                    exclude_recursive(&mut out, &excluded, *theta, *phi, n)?;
                }
            }
            _ => out.push(op.clone())?,
        }
    }
    Ok(out)
}

fn exclude_recursive(out: &mut Circuit, excluded: &[usize], theta: f64, phi: f64, n: usize) -> Result<()> {
    match excluded.split_first() {
        None => out.push(GateOp::ms(&all(n), theta, phi)),
        Some((&e, rest)) => {
            for _ in 0..2 {
                exclude_recursive(out, rest, theta / 2.0, phi, n)?;
                out.push(flip(e))?;
            }
            Ok(())
        }
    }
}

/// Replace every MS gate with negative angle by forward gates.
pub fn forward_only(circuit: &Circuit) -> Result<Circuit> {
    let n = circuit.num_qubits();
    let mut out = Circuit::new(n).with_target(circuit.target().to_string());
    for op in circuit.ops() {
        match op {
            GateOp::Ms { targets, theta, phi } if *theta < 0.0 => {
                out.append(&backward_ms_as_forward(-theta, *phi, targets, n)?)?;
            }
            _ => out.push(op.clone())?,
        }
    }
    Ok(out)
}
