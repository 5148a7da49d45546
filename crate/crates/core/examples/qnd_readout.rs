//! QND readout of a four-body stabilizer through the ancilla. Repeated
//! readouts of the same state agree and leave it in an eigenstate.

use ionsim::circuits::read_stabilizer;
use ionsim::{Pauli, PauliString, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ionsim::Result<()> {
    let a = PauliString::uniform(4, &[0, 1, 2, 3], Pauli::X)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for run in 0..5 {
        let sys = StateVector::random(4, &mut rng)?;
        let mut psi = StateVector::zero(1)?.tensor(&sys)?;
        let before = psi.expectation(&a.shifted(1))?;
        let mut outcomes = Vec::new();
        for _ in 0..4 {
            let (m, next) = read_stabilizer(&psi, &a, &mut rng)?;
            psi = next;
            outcomes.push(m);
        }
        println!("run {run}: <A> before {before:+.3}, outcomes {outcomes:?}, <A> after {:+.3}", psi.expectation(&a.shifted(1))?);
    }
    Ok(())
}
