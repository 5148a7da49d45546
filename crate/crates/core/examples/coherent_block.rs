//! Four-body coherent evolution exp(iφ σx σx σx σx) from two MS gates and an
//! ancilla rotation, checked against the dense matrix exponential.

use ionsim::circuits::{check_circuit, coherent_block, coherent_block_ancilla_free};
use ionsim::gates::matrix_exp_oracle;
use ionsim::{Pauli, PauliString};

fn main() -> ionsim::Result<()> {
    let phi = 0.3;
    let a = PauliString::uniform(4, &[0, 1, 2, 3], Pauli::X)?;

    let block = coherent_block(&a, phi)?;
    println!("{block}");
    // With the ancilla in |0>, the block acts as exp(iφA) on the system.
    let reference = PauliString::single(5, 0, Pauli::Z)?.mul(&a.shifted(1))?.to_matrix();
    let exact = matrix_exp_oracle(&(reference * ionsim::C64::new(-phi, 0.0)))?;
    let eq = check_circuit(&block, &exact)?;
    println!("with ancilla: 1 - overlap = {:.2e}", eq.deviation(false));

    let free = coherent_block_ancilla_free(&a, phi)?;
    let exact = matrix_exp_oracle(&(a.to_matrix() * ionsim::C64::new(-phi, 0.0)))?;
    println!("ancilla-free: 1 - overlap = {:.2e}", check_circuit(&free, &exact)?.deviation(false));
    Ok(())
}
