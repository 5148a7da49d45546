//! Encoded |0⟩ of the seven-qubit color code and transversal logical gates.

use ionsim::models::{color_code_seven, logical_gate, logical_prepare_zero, syndrome, LogicalGate};

fn main() -> ionsim::Result<()> {
    let model = color_code_seven();
    let mut rho = logical_prepare_zero(&model, std::f64::consts::FRAC_PI_2)?;
    let xbar = model.logical_x.clone().expect("color code has logicals");
    let zbar = model.logical_z.clone().expect("color code has logicals");
    let show = |tag: &str, rho: &ionsim::DensityMatrix| -> ionsim::Result<()> {
        let s: Vec<String> = syndrome(rho, &model)?.iter().map(|v| format!("{v:+.0}")).collect();
        println!("{tag:<8} syndrome [{}]  <Xbar>={:+.3} <Zbar>={:+.3}", s.join(" "), rho.expectation(&xbar)?, rho.expectation(&zbar)?);
        Ok(())
    };
    show("|0>", &rho)?;
    for gate in [LogicalGate::X, LogicalGate::H, LogicalGate::K, LogicalGate::K, LogicalGate::H] {
        logical_gate(&model, &mut rho, gate)?;
        show(&format!("{gate:?}"), &rho)?;
    }
    Ok(())
}
