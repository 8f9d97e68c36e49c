//! Interaction-picture dynamics: resonant cavity coupling on the |2⟩↔|3⟩
//! transition, resonant classical pulses, their propagators and the
//! Lindblad master equation.

mod hamiltonian;
mod lindblad;
mod propagator;

pub use hamiltonian::{jc_hamiltonian, jc_sum_hamiltonian, pulse_hamiltonian};
pub use lindblad::{lindblad_step, LindbladOptions, Lindbladian};
pub use propagator::{evolve_numeric, jc_propagator_closed, pulse_propagator_closed, pulse_rotation_local};

use crate::hilbert::{Qudit, LEVELS};
use crate::{Result, SimError};

/// Cavity coupling of one qudit's |2⟩↔|3⟩ transition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JcCoupling {
    pub qudit: Qudit,
    /// Angular coupling rate, rad/s.
    pub g: f64,
}

impl JcCoupling {
    pub fn new(qudit: Qudit, g: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(SimError::invalid(
                format!("g{}", qudit.id()),
                format!("coupling must be positive, got {g}"),
            ));
        }
        Ok(JcCoupling { qudit, g })
    }
}

/// A driven transition `|lower⟩ ↔ |upper⟩`, where `lower` is the
/// lower-energy level in that qudit's own ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TransitionSelector {
    lower: usize,
    upper: usize,
}

impl TransitionSelector {
    pub fn new(lower: usize, upper: usize) -> Result<Self> {
        for level in [lower, upper] {
            if level >= LEVELS {
                return Err(SimError::LevelOutOfRange { level });
            }
        }
        if lower == upper {
            return Err(SimError::invalid(
                "transition",
                format!("levels must differ, got {lower} and {upper}"),
            ));
        }
        Ok(TransitionSelector { lower, upper })
    }

    pub fn lower(self) -> usize {
        self.lower
    }

    pub fn upper(self) -> usize {
        self.upper
    }
}

/// Square resonant pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseDrive {
    pub qudit: Qudit,
    pub transition: TransitionSelector,
    /// Rabi frequency Ω, rad/s.
    pub rabi: f64,
    /// Initial phase φ, rad.
    pub phase: f64,
    /// Duration, s.
    pub duration: f64,
}

impl PulseDrive {
    pub fn new(qudit: Qudit, transition: TransitionSelector, rabi: f64, phase: f64, duration: f64) -> Result<Self> {
        if !(rabi > 0.0 && rabi.is_finite()) {
            return Err(SimError::invalid("rabi", format!("must be positive, got {rabi}")));
        }
        if !(duration >= 0.0 && duration.is_finite()) {
            return Err(SimError::invalid(
                "t",
                format!("duration must be non-negative, got {duration}"),
            ));
        }
        if !phase.is_finite() {
            return Err(SimError::invalid("phase", "must be finite"));
        }
        Ok(PulseDrive {
            qudit,
            transition,
            rabi,
            phase,
            duration,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollapseKind {
    /// `|3⟩ → |target⟩` decay, `L = √γ |target⟩⟨3|`. Target defaults to 2.
    Level3Relaxation { target: usize },
    /// Pure dephasing of level 3 coherences, `L = √(2γ) |3⟩⟨3|`.
    Level3Dephasing,
    /// Photon loss, `L = √κ a`.
    CavityDecay,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollapseOperator {
    pub kind: CollapseKind,
    /// Rate in 1/s.
    pub rate: f64,
    /// Owning qudit for the level-3 channels.
    pub qudit: Option<Qudit>,
}

impl CollapseOperator {
    pub fn relaxation(qudit: Qudit, rate: f64) -> Self {
        CollapseOperator {
            kind: CollapseKind::Level3Relaxation { target: 2 },
            rate,
            qudit: Some(qudit),
        }
    }

    pub fn relaxation_to(qudit: Qudit, target: usize, rate: f64) -> Self {
        CollapseOperator {
            kind: CollapseKind::Level3Relaxation { target },
            rate,
            qudit: Some(qudit),
        }
    }

    pub fn dephasing(qudit: Qudit, rate: f64) -> Self {
        CollapseOperator {
            kind: CollapseKind::Level3Dephasing,
            rate,
            qudit: Some(qudit),
        }
    }

    pub fn cavity_decay(rate: f64) -> Self {
        CollapseOperator {
            kind: CollapseKind::CavityDecay,
            rate,
            qudit: None,
        }
    }

    pub fn channel_name(&self) -> &'static str {
        match self.kind {
            CollapseKind::Level3Relaxation { .. } => "gamma3r",
            CollapseKind::Level3Dephasing => "gamma3p",
            CollapseKind::CavityDecay => "kappa",
        }
    }
}

/// How pulses interact with the always-on cavity coupling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EvolutionMode {
    /// Pulses act alone; cavity coupling is suspended for their duration.
    #[default]
    Idealized,
    /// Pulse and all three cavity couplings act together during pulses.
    Simultaneous,
}
