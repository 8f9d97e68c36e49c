//! Gate extraction and scoring, feasibility margins, the conventional
//! 25-gate decomposition and Ω/g error sweeps.

mod decomposition;
mod feasibility;
mod fidelity;
mod gate;
mod sweep;

pub use decomposition::{build_ccz_decomposition, circuit_unitary, GateCircuit, GateCounts, GateElement};
pub use feasibility::{
    cavity_lifetime, feasibility_check, feasibility_from_lifetimes, FeasibilityReport, Margins, MARGIN_THRESHOLD,
};
pub use fidelity::{
    align_global_phase, avg_from_process, channel_fidelity, channel_fidelity_with, gate_fidelities, ChannelReport,
    FidelityReport,
};
pub use gate::{extract_gate, extract_gate_with, GateMatrix, LOGICAL_DIM};
pub use sweep::{error_scaling_sweep, sweep_config, sweep_point, SweepRatio, SweepRow};
