//! Kraus maps, Lindblad generators and Trotterized digital evolution.

mod kraus;
mod lindblad;
mod trotter;

pub use kraus::{
    apply_channel, apply_stabilizer_pump, choi_distance, optical_pump_reset, stabilizer_pump_channel, KrausChannel,
};
pub use lindblad::{integrate_master_equation, lindblad_rhs, LindbladTerm, MasterEquation};
pub use trotter::{trotter_step, PumpRealization, Realizations};
