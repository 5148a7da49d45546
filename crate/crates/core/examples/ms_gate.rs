//! Mølmer–Sørensen gate on four ions: |0000⟩ → GHZ at θ = π/2.
//! For an odd ion count the same pulse needs an extra local rotation.

use std::f64::consts::FRAC_PI_2;

use ionsim::gates::{ms_unitary, GateOp};
use ionsim::{Pauli, PauliString, StateVector};

fn main() -> ionsim::Result<()> {
    let n = 4;
    let targets: Vec<usize> = (0..n).collect();
    let mut psi = StateVector::zero(n)?;
    GateOp::ms(&targets, FRAC_PI_2, 0.0).apply(&mut psi)?;

    let amps = psi.amplitudes();
    println!("|0000> amplitude: {:.4}", amps[0]);
    println!("|1111> amplitude: {:.4}", amps[(1 << n) - 1]);
    let parity = PauliString::uniform(n, &targets, Pauli::Z)?;
    println!("<Z..Z> = {:.6}", psi.expectation(&parity)?);

    let u = ms_unitary(FRAC_PI_2, 0.0, &targets, n)?;
    let u4 = &u * &u * &u * &u;
    println!("MS(pi/2)^4 is diagonal +-1: {:.3e} off-diagonal weight", {
        let mut w = 0.0;
        for r in 0..u4.nrows() {
            for c in 0..u4.ncols() {
                if r != c {
                    w += u4[(r, c)].norm_sqr();
                }
            }
        }
        w
    });
    Ok(())
}
