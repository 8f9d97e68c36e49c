//! The five-step CCZ pulse program: compilation, execution, per-step
//! transformation tables and the text schedule format.

mod expectations;
mod run;
mod schedule;
mod text;

pub use expectations::{
    check_step_expectations, step_expectations, ExpectationRow, LocalKet, StepExpectation, TransitionCheck,
};
pub use run::{
    run_schedule, run_schedule_density, run_schedule_density_with, segment_hamiltonian, segment_propagator,
    ScheduleGenerators, SchedulePropagators,
};
pub use schedule::{
    compile_ccz_schedule, total_operation_time, DecoherenceRates, ProtocolConfig, Schedule, ScheduledSegment, Segment,
    StepTag, SubOp,
};
pub use text::{emit_schedule, parse_schedule};
