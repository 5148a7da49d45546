//! Coherent blocks with Gaussian-distributed φ average to dephasing. The gap
//! to the master equation shrinks quickly with the angle scale.

use ionsim::noise::dephasing_limit_check;

fn main() -> ionsim::Result<()> {
    for s in [0.1, 0.05, 0.025] {
        let r = dephasing_limit_check(s, s, 1.0, 10, 5)?;
        println!("phi0=sigma={s:<6} max trace distance {:.3e}", r.max_trace_distance);
    }
    Ok(())
}
