use super::schedule::{ProtocolConfig, Schedule, Segment};
use crate::dynamics::{
    evolve_numeric, jc_sum_hamiltonian, pulse_hamiltonian, pulse_propagator_closed, EvolutionMode, LindbladOptions,
    Lindbladian,
};
use crate::hilbert::{DensityMatrix, Operator, StateVector};
use crate::{CMatrix, Exec, Result, SimError};

/// Hamiltonian acting during one segment.
///
/// Waits always carry all three cavity couplings. Pulses carry only the
/// drive in idealized mode and drive plus couplings in simultaneous mode.
pub fn segment_hamiltonian(segment: &Segment, cfg: &ProtocolConfig, jc_sum: &Operator) -> Result<Operator> {
    match segment {
        Segment::Wait { .. } => Ok(jc_sum.clone()),
        Segment::Pulse(drive) => {
            let hp = pulse_hamiltonian(cfg.space(), drive)?;
            Ok(match cfg.mode() {
                EvolutionMode::Idealized => hp,
                EvolutionMode::Simultaneous => &hp + jc_sum,
            })
        }
    }
}

/// Unitary for one segment. Zero-length segments are the identity.
pub fn segment_propagator(segment: &Segment, cfg: &ProtocolConfig, jc_sum: &Operator) -> Result<Operator> {
    let dim = cfg.space().dim();
    if segment.duration() == 0.0 {
        return Ok(Operator::identity(dim));
    }
    match (segment, cfg.mode()) {
        (Segment::Pulse(drive), EvolutionMode::Idealized) => pulse_propagator_closed(cfg.space(), drive),
        _ => evolve_numeric(&segment_hamiltonian(segment, cfg, jc_sum)?, segment.duration()),
    }
}

/// Per-segment unitaries for a schedule, built once and reused for many
/// input states.
#[derive(Clone, Debug)]
pub struct SchedulePropagators {
    unitaries: Vec<Operator>,
}

impl SchedulePropagators {
    pub fn build(sched: &Schedule, cfg: &ProtocolConfig, exec: Exec) -> Result<Self> {
        let jc_sum = jc_sum_hamiltonian(cfg.space(), &cfg.jc_couplings());
        let unitaries = exec
            .map(sched.segments(), |s| segment_propagator(&s.segment, cfg, &jc_sum))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(SchedulePropagators { unitaries })
    }

    pub fn unitaries(&self) -> &[Operator] {
        &self.unitaries
    }

    /// Apply every segment in order.
    pub fn apply(&self, initial: &StateVector) -> Result<StateVector> {
        self.unitaries.iter().try_fold(initial.clone(), |psi, u| u.apply(&psi))
    }

    /// States after each segment (the initial state is not included).
    pub fn trajectory(&self, initial: &StateVector) -> Result<Vec<StateVector>> {
        let mut out = Vec::with_capacity(self.unitaries.len());
        let mut psi = initial.clone();
        for u in &self.unitaries {
            psi = u.apply(&psi)?;
            out.push(psi.clone());
        }
        Ok(out)
    }

    /// Product of all segment unitaries, last segment leftmost.
    pub fn total(&self) -> Option<Operator> {
        let mut iter = self.unitaries.iter();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, u| u.compose(&acc)))
    }
}

fn check_dim(cfg: &ProtocolConfig, found: usize) -> Result<()> {
    let expected = cfg.space().dim();
    if found != expected {
        return Err(SimError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Evolve a pure state through the schedule.
pub fn run_schedule(initial: &StateVector, sched: &Schedule, cfg: &ProtocolConfig) -> Result<StateVector> {
    check_dim(cfg, initial.dim())?;
    SchedulePropagators::build(sched, cfg, Exec::default())?.apply(initial)
}

/// Per-segment Lindblad generators for a schedule.
#[derive(Clone, Debug)]
pub struct ScheduleGenerators {
    segments: Vec<(Lindbladian, f64)>,
}

impl ScheduleGenerators {
    pub fn build(sched: &Schedule, cfg: &ProtocolConfig) -> Result<Self> {
        let jc_sum = jc_sum_hamiltonian(cfg.space(), &cfg.jc_couplings());
        let collapses = cfg.collapse_operators();
        let segments = sched
            .segments()
            .iter()
            .map(|s| {
                let h = segment_hamiltonian(&s.segment, cfg, &jc_sum)?;
                Ok((Lindbladian::new(cfg.space(), &h, &collapses)?, s.segment.duration()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ScheduleGenerators { segments })
    }

    /// Evolve any matrix (the master equation is linear), calling
    /// `observe(segment_index, ρ)` after every segment.
    pub fn evolve_observed<F>(&self, initial: CMatrix, opts: &LindbladOptions, mut observe: F) -> CMatrix
    where
        F: FnMut(usize, &CMatrix),
    {
        let mut rho = initial;
        for (k, (gen, t)) in self.segments.iter().enumerate() {
            rho = gen.evolve(rho, *t, opts);
            observe(k, &rho);
        }
        rho
    }

    pub fn evolve(&self, initial: CMatrix, opts: &LindbladOptions) -> CMatrix {
        self.evolve_observed(initial, opts, |_, _| {})
    }

    /// Total integration steps for one pass through the schedule.
    pub fn total_steps(&self, opts: &LindbladOptions) -> usize {
        self.segments.iter().map(|(g, t)| g.steps_for(*t, opts)).sum()
    }
}

/// Evolve a density matrix through the schedule under the configured
/// decoherence channels.
pub fn run_schedule_density(initial: &DensityMatrix, sched: &Schedule, cfg: &ProtocolConfig) -> Result<DensityMatrix> {
    run_schedule_density_with(initial, sched, cfg, &LindbladOptions::default())
}

pub fn run_schedule_density_with(
    initial: &DensityMatrix,
    sched: &Schedule,
    cfg: &ProtocolConfig,
    opts: &LindbladOptions,
) -> Result<DensityMatrix> {
    check_dim(cfg, initial.dim())?;
    let gens = ScheduleGenerators::build(sched, cfg)?;
    Ok(DensityMatrix::from_matrix_unchecked(
        gens.evolve(initial.entries().clone(), opts),
    ))
}
