//! Subset MS gates from global MS pulses and addressed refocusing flips.

use std::f64::consts::FRAC_PI_4;

use ionsim::circuits::{check_circuit, refocused_ms_excluding, star_ms, two_ion_ms_via_refocus};
use ionsim::gates::{backward_ms_as_forward, ms_unitary};

fn main() -> ionsim::Result<()> {
    let n = 5;
    let c = refocused_ms_excluding(4, FRAC_PI_4, 0.0, n)?;
    println!("{c}");
    let eq = check_circuit(&c, &ms_unitary(FRAC_PI_4, 0.0, &[0, 1, 2, 3], n)?)?;
    println!("MS on ions 0..3 only: 1 - overlap = {:.2e}\n", eq.deviation(false));

    let c = two_ion_ms_via_refocus(3, FRAC_PI_4, 0.0, n)?;
    let eq = check_circuit(&c, &ms_unitary(FRAC_PI_4, 0.0, &[0, 3], n)?)?;
    println!("MS on ions 0,3: {} gates, 1 - overlap = {:.2e}", c.len(), eq.deviation(false));

    let c = star_ms(FRAC_PI_4, 0.0, n)?;
    println!("star of two-ion gates: {} MS pulses", c.ms_count());

    let back = backward_ms_as_forward(0.7, 0.0, &[0, 1, 2, 3], 4)?;
    let eq = check_circuit(&back, &ms_unitary(-0.7, 0.0, &[0, 1, 2, 3], 4)?)?;
    println!("MS(-0.7) from forward pulses: strict deviation {:.2e}", eq.deviation(true));
    Ok(())
}
