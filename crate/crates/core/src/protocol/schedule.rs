use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::dynamics::{CollapseOperator, EvolutionMode, JcCoupling, PulseDrive, TransitionSelector};
use crate::hilbert::{CompositeSpace, LogicalEncoding, Qudit};
use crate::{Result, SimError};

/// Sub-operation within a step: pulse (a), wait (b), pulse (c).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubOp {
    A,
    B,
    C,
}

impl SubOp {
    pub const ALL: [SubOp; 3] = [SubOp::A, SubOp::B, SubOp::C];

    pub fn letter(self) -> char {
        match self {
            SubOp::A => 'a',
            SubOp::B => 'b',
            SubOp::C => 'c',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'a' => Some(SubOp::A),
            'b' => Some(SubOp::B),
            'c' => Some(SubOp::C),
            _ => None,
        }
    }
}

/// Position of a segment in the five-step program, e.g. `3b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepTag {
    pub step: u8,
    pub sub: SubOp,
}

impl StepTag {
    pub fn new(step: u8, sub: SubOp) -> Self {
        StepTag { step, sub }
    }
}

impl fmt::Display for StepTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.step, self.sub.letter())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Segment {
    Pulse(PulseDrive),
    /// Free evolution under the summed cavity couplings.
    Wait {
        duration: f64,
    },
}

impl Segment {
    pub fn duration(&self) -> f64 {
        match self {
            Segment::Pulse(p) => p.duration,
            Segment::Wait { duration } => *duration,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduledSegment {
    pub segment: Segment,
    pub tag: Option<StepTag>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Schedule {
    segments: Vec<ScheduledSegment>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, segment: Segment, tag: Option<StepTag>) -> Result<()> {
        let d = segment.duration();
        if !(d >= 0.0 && d.is_finite()) {
            return Err(SimError::invalid(
                "t",
                format!("segment duration must be non-negative, got {d}"),
            ));
        }
        self.segments.push(ScheduledSegment { segment, tag });
        Ok(())
    }

    pub fn segments(&self) -> &[ScheduledSegment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.segment.duration()).sum()
    }

    /// Segments belonging to one step, in order.
    pub fn step(&self, step: u8) -> impl Iterator<Item = &ScheduledSegment> {
        self.segments
            .iter()
            .filter(move |s| s.tag.map(|t| t.step) == Some(step))
    }
}

/// Decay and dephasing rates, in 1/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecoherenceRates {
    pub gamma3r: f64,
    pub gamma3p: f64,
    pub kappa: f64,
    /// Level that |3⟩ relaxes into.
    pub relaxation_target: usize,
}

impl DecoherenceRates {
    pub fn new(gamma3r: f64, gamma3p: f64, kappa: f64) -> Result<Self> {
        let rates = DecoherenceRates {
            gamma3r,
            gamma3p,
            kappa,
            relaxation_target: 2,
        };
        rates.validate()?;
        Ok(rates)
    }

    /// Build from lifetimes in seconds; `None` switches a channel off.
    pub fn from_lifetimes(gamma3r_inv: Option<f64>, gamma3p_inv: Option<f64>, kappa_inv: Option<f64>) -> Result<Self> {
        let inv = |name: &'static str, x: Option<f64>| -> Result<f64> {
            match x {
                None => Ok(0.0),
                Some(v) if v > 0.0 && v.is_finite() => Ok(1.0 / v),
                Some(v) => Err(SimError::invalid(name, format!("lifetime must be positive, got {v}"))),
            }
        };
        Self::new(
            inv("gamma3r_inv_s", gamma3r_inv)?,
            inv("gamma3p_inv_s", gamma3p_inv)?,
            inv("kappa_inv_s", kappa_inv)?,
        )
    }

    pub fn with_relaxation_target(mut self, target: usize) -> Result<Self> {
        self.relaxation_target = target;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        for (channel, rate) in [
            ("gamma3r", self.gamma3r),
            ("gamma3p", self.gamma3p),
            ("kappa", self.kappa),
        ] {
            if !(rate >= 0.0 && rate.is_finite()) {
                return Err(SimError::NegativeRate { channel, rate });
            }
        }
        if self.relaxation_target >= 3 {
            return Err(SimError::invalid(
                "relaxation_target",
                format!("must be 0, 1 or 2, got {}", self.relaxation_target),
            ));
        }
        Ok(())
    }

    pub fn collapse_operators(&self) -> Vec<CollapseOperator> {
        let mut ops = Vec::new();
        for q in Qudit::ALL {
            if self.gamma3r > 0.0 {
                ops.push(CollapseOperator::relaxation_to(q, self.relaxation_target, self.gamma3r));
            }
            if self.gamma3p > 0.0 {
                ops.push(CollapseOperator::dephasing(q, self.gamma3p));
            }
        }
        if self.kappa > 0.0 {
            ops.push(CollapseOperator::cavity_decay(self.kappa));
        }
        ops
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolConfig {
    couplings: [f64; 3],
    omega: f64,
    mode: EvolutionMode,
    encoding: LogicalEncoding,
    decoherence: Option<DecoherenceRates>,
    space: CompositeSpace,
    rabi_overrides: BTreeMap<StepTag, f64>,
}

impl ProtocolConfig {
    /// Couplings `g1..g3` and global Rabi frequency `Ω`, all in rad/s.
    /// Idealized mode, default encoding, no decoherence, `n_max = 3`.
    pub fn new(couplings: [f64; 3], omega: f64) -> Result<Self> {
        let cfg = ProtocolConfig {
            couplings,
            omega,
            mode: EvolutionMode::Idealized,
            encoding: LogicalEncoding::default(),
            decoherence: None,
            space: CompositeSpace::with_n_max(3)?,
            rabi_overrides: BTreeMap::new(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Uniform coupling `g` with `Ω = ratio·g`.
    pub fn uniform(g: f64, rabi_over_g: f64) -> Result<Self> {
        Self::new([g; 3], rabi_over_g * g)
    }

    /// `g/2π = 220 MHz` on all three qudits, `Ω = 10 g`.
    pub fn reference() -> Self {
        Self::uniform(2.0 * PI * 220e6, 10.0).expect("reference parameters are valid")
    }

    pub fn with_mode(mut self, mode: EvolutionMode) -> Result<Self> {
        self.mode = mode;
        self.validate()?;
        Ok(self)
    }

    pub fn with_n_max(mut self, n_max: usize) -> Result<Self> {
        self.space = CompositeSpace::with_n_max(n_max)?;
        Ok(self)
    }

    pub fn with_omega(mut self, omega: f64) -> Result<Self> {
        self.omega = omega;
        self.validate()?;
        Ok(self)
    }

    pub fn with_encoding(mut self, encoding: LogicalEncoding) -> Self {
        self.encoding = encoding;
        self
    }

    pub fn with_decoherence(mut self, rates: Option<DecoherenceRates>) -> Self {
        self.decoherence = rates;
        self
    }

    /// Give one pulse its own Rabi frequency; its duration becomes `π/2Ω'`.
    pub fn with_rabi_override(mut self, tag: StepTag, rabi: f64) -> Result<Self> {
        if tag.sub == SubOp::B || !(1..=5).contains(&tag.step) {
            return Err(SimError::invalid("rabi_override", format!("{tag} is not a pulse")));
        }
        if !(rabi > 0.0 && rabi.is_finite()) {
            return Err(SimError::invalid(
                "rabi_override",
                format!("must be positive, got {rabi}"),
            ));
        }
        self.rabi_overrides.insert(tag, rabi);
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        for (q, &g) in Qudit::ALL.iter().zip(&self.couplings) {
            JcCoupling::new(*q, g)?;
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(SimError::invalid(
                "omega",
                format!("must be positive, got {}", self.omega),
            ));
        }
        if self.mode == EvolutionMode::Simultaneous {
            let g_max = self.max_coupling();
            if self.omega <= g_max {
                return Err(SimError::invalid(
                    "omega",
                    format!("simultaneous mode needs Ω > max g ({} <= {g_max})", self.omega),
                ));
            }
            if self.omega < 5.0 * g_max {
                log::warn!("Ω/g = {:.2} is below 5; pulse errors will be large", self.omega / g_max);
            }
        }
        Ok(())
    }

    pub fn couplings(&self) -> [f64; 3] {
        self.couplings
    }

    pub fn coupling(&self, q: Qudit) -> f64 {
        self.couplings[q.slot()]
    }

    pub fn max_coupling(&self) -> f64 {
        self.couplings.iter().copied().fold(0.0, f64::max)
    }

    pub fn jc_couplings(&self) -> [JcCoupling; 3] {
        Qudit::ALL.map(|q| JcCoupling {
            qudit: q,
            g: self.coupling(q),
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn rabi_for(&self, tag: StepTag) -> f64 {
        self.rabi_overrides.get(&tag).copied().unwrap_or(self.omega)
    }

    pub fn mode(&self) -> EvolutionMode {
        self.mode
    }

    pub fn encoding(&self) -> &LogicalEncoding {
        &self.encoding
    }

    pub fn decoherence(&self) -> Option<&DecoherenceRates> {
        self.decoherence.as_ref()
    }

    pub fn collapse_operators(&self) -> Vec<CollapseOperator> {
        self.decoherence.map(|d| d.collapse_operators()).unwrap_or_default()
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }
}

struct StepPlan {
    qudit: Qudit,
    first: (usize, usize, f64),
    wait_angle: f64,
    second: (usize, usize, f64),
}

/// Pulses are `(lower, upper, phase)`; the wait lasts `wait_angle / g`.
const PROGRAM: [StepPlan; 5] = [
    StepPlan {
        qudit: Qudit::One,
        first: (1, 3, -FRAC_PI_2),
        wait_angle: FRAC_PI_2,
        second: (0, 2, -FRAC_PI_2),
    },
    StepPlan {
        qudit: Qudit::Two,
        first: (0, 2, -FRAC_PI_2),
        wait_angle: FRAC_PI_2,
        second: (0, 3, PI),
    },
    StepPlan {
        qudit: Qudit::Three,
        first: (1, 2, -FRAC_PI_2),
        wait_angle: PI,
        second: (1, 2, FRAC_PI_2),
    },
    StepPlan {
        qudit: Qudit::Two,
        first: (0, 3, PI),
        wait_angle: FRAC_PI_2,
        second: (0, 2, FRAC_PI_2),
    },
    StepPlan {
        qudit: Qudit::One,
        first: (0, 2, FRAC_PI_2),
        wait_angle: FRAC_PI_2,
        second: (1, 3, -FRAC_PI_2),
    },
];

/// The five-step CCZ program: for each step a π/2 pulse, a cavity-mediated
/// wait on the addressed qudit, and a second π/2 pulse.
pub fn compile_ccz_schedule(cfg: &ProtocolConfig) -> Schedule {
    let mut schedule = Schedule::new();
    for (k, plan) in PROGRAM.iter().enumerate() {
        let step = k as u8 + 1;
        let pulse = |sub: SubOp, (lo, hi, phase): (usize, usize, f64)| {
            let rabi = cfg.rabi_for(StepTag::new(step, sub));
            let transition = TransitionSelector::new(lo, hi).expect("program transitions are valid");
            Segment::Pulse(PulseDrive {
                qudit: plan.qudit,
                transition,
                rabi,
                phase,
                duration: FRAC_PI_2 / rabi,
            })
        };
        let wait = Segment::Wait {
            duration: plan.wait_angle / cfg.coupling(plan.qudit),
        };
        for (sub, seg) in [
            (SubOp::A, pulse(SubOp::A, plan.first)),
            (SubOp::B, wait),
            (SubOp::C, pulse(SubOp::C, plan.second)),
        ] {
            schedule
                .push(seg, Some(StepTag::new(step, sub)))
                .expect("program durations are positive");
        }
    }
    schedule
}

/// `τ = π/g₁ + π/g₂ + π/g₃ + Σ_pulses π/2Ω`; with a single Ω the pulse
/// sum is `5π/Ω`.
pub fn total_operation_time(cfg: &ProtocolConfig) -> f64 {
    let waits: f64 = cfg.couplings.iter().map(|g| PI / g).sum();
    let pulses: f64 = (1..=5u8)
        .flat_map(|step| [SubOp::A, SubOp::C].map(|sub| StepTag::new(step, sub)))
        .map(|tag| FRAC_PI_2 / cfg.rabi_for(tag))
        .sum();
    waits + pulses
}
