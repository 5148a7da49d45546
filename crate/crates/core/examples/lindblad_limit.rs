//! Small-θ pumps converge to the Lindblad master equation with jump
//! c = ½ σz (1 − A) at rate γ = θ²/τ.

use ionsim::channels::{integrate_master_equation, MasterEquation, LindbladTerm};
use ionsim::circuits::realized_flip;
use ionsim::models::StabilizerSpec;
use ionsim::{DensityMatrix, Pauli, PauliString};

fn main() -> ionsim::Result<()> {
    let a = PauliString::uniform(4, &[0, 1, 2, 3], Pauli::X)?;
    let flip = realized_flip(&a, 3)?;
    let spec = StabilizerSpec::new("A", a.clone(), 3, 0.0)?;
    let rho0 = DensityMatrix::new_basis_state(4, "0110")?;
    let total: f64 = 1.0;
    for theta in [0.4, 0.2, 0.1, 0.05] {
        let tau = theta * theta;
        let steps = (total / tau as f64).round() as usize;
        let channel = spec.pump_channel(theta)?;
        let mut rho = rho0.clone();
        for _ in 0..steps {
            rho = channel.apply(&rho)?;
        }
        let eq = MasterEquation::new(vec![], vec![LindbladTerm::pump(&a, &flip, 1.0)?])?;
        let exact = integrate_master_equation(&rho0, &eq, steps as f64 * tau, 1e-3)?;
        println!("theta={theta:<5} steps={steps:<4} distance to master equation: {:.3e}", rho.trace_distance(&exact)?);
    }
    Ok(())
}
