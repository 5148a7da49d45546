//! Controlled correction gates C[k](θ) from MS pulses and local rotations.

use ionsim::circuits::{check_circuit, decompose_correcting_gate};
use ionsim::gates::{CorrectionRow, GateOp};

fn main() -> ionsim::Result<()> {
    let theta = 0.8;
    for row in CorrectionRow::ALL {
        let reference = GateOp::Controlled { row, theta, control: 0, target: 4 }.unitary(5)?;
        let bare = decompose_correcting_gate(row, theta, 4, 5, false)?;
        let refocused = decompose_correcting_gate(row, theta, 4, 5, true)?;
        println!(
            "C[{}]: {:>2} gates, deviation {:.1e}; refocused {:>2} gates, deviation {:.1e}",
            row.index(),
            bare.len(),
            check_circuit(&bare, &reference)?.deviation(false),
            refocused.len(),
            check_circuit(&refocused, &reference)?.deviation(false),
        );
    }
    println!("\n{}", decompose_correcting_gate(CorrectionRow::Row4, theta, 4, 5, false)?);
    Ok(())
}
