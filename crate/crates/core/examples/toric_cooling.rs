//! Cool a random product state of the two-plaquette toric code into its
//! ground state with one sweep of stabilizer pumps.

use ionsim::models::{cool_to_ground, excitations, toric_two_plaquette};
use ionsim::{DensityMatrix, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ionsim::Result<()> {
    let model = toric_two_plaquette();
    println!("ground-space dimension: {}", model.ground_space_dimension());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let psi = StateVector::random_product(7, &mut rng)?;
    let rho0 = DensityMatrix::from_pure(&psi)?;
    println!("initial ground weight {:.4}", model.ground_space_weight(&rho0)?);
    let (rho, trace) = cool_to_ground(&model, &rho0, std::f64::consts::FRAC_PI_2, 1)?;
    println!("{:>4} {}", "pump", trace.labels.iter().map(|l| format!("{l:>7}")).collect::<String>());
    for (k, row) in trace.rows.iter().enumerate() {
        println!("{k:>4} {}", row.iter().map(|v| format!("{v:>7.3}")).collect::<String>());
    }
    println!("final ground weight {:.12}", model.ground_space_weight(&rho)?);
    println!("remaining excitations: {:?}", excitations(&rho, &model)?);
    Ok(())
}
