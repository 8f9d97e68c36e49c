//! Hand-transcribed single-step transformation tables for the five steps,
//! including the intermediate state after each sub-operation, and a
//! replay that checks the simulator against them.

use super::run::SchedulePropagators;
use super::schedule::{compile_ccz_schedule, ProtocolConfig, StepTag, SubOp};
use crate::hilbert::{BasisLabel, Qudit, StateVector};
use crate::{Exec, Result, C64};

/// `coeff · |level⟩_q |photons⟩_c` on the qudit a step addresses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalKet {
    pub coeff: C64,
    pub level: usize,
    pub photons: usize,
}

/// Input ket followed by the state after sub-operations (a), (b), (c).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpectationRow {
    pub chain: [LocalKet; 4],
}

impl ExpectationRow {
    pub fn input(&self) -> LocalKet {
        self.chain[0]
    }

    pub fn after(&self, sub: SubOp) -> LocalKet {
        match sub {
            SubOp::A => self.chain[1],
            SubOp::B => self.chain[2],
            SubOp::C => self.chain[3],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepExpectation {
    pub step: u8,
    pub qudit: Qudit,
    pub rows: Vec<ExpectationRow>,
}

const ONE: C64 = C64::new(1.0, 0.0);
const NEG: C64 = C64::new(-1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);
const NEG_I: C64 = C64::new(0.0, -1.0);

fn k(coeff: C64, level: usize, photons: usize) -> LocalKet {
    LocalKet { coeff, level, photons }
}

fn row(chain: [(C64, usize, usize); 4]) -> ExpectationRow {
    ExpectationRow {
        chain: chain.map(|(c, l, n)| k(c, l, n)),
    }
}

pub fn step_expectations() -> Vec<StepExpectation> {
    vec![
        StepExpectation {
            step: 1,
            qudit: Qudit::One,
            rows: vec![
                row([(ONE, 1, 0), (ONE, 3, 0), (NEG_I, 2, 1), (I, 0, 1)]),
                row([(ONE, 0, 0), (ONE, 0, 0), (ONE, 0, 0), (ONE, 2, 0)]),
            ],
        },
        StepExpectation {
            step: 2,
            qudit: Qudit::Two,
            rows: vec![
                row([(ONE, 0, 1), (ONE, 2, 1), (NEG_I, 3, 0), (ONE, 0, 0)]),
                row([(ONE, 1, 1), (ONE, 1, 1), (ONE, 1, 1), (ONE, 1, 1)]),
                row([(ONE, 0, 0), (ONE, 2, 0), (ONE, 2, 0), (ONE, 2, 0)]),
                row([(ONE, 1, 0), (ONE, 1, 0), (ONE, 1, 0), (ONE, 1, 0)]),
            ],
        },
        StepExpectation {
            step: 3,
            qudit: Qudit::Three,
            rows: vec![
                row([(ONE, 0, 0), (ONE, 0, 0), (ONE, 0, 0), (ONE, 0, 0)]),
                row([(ONE, 1, 0), (ONE, 2, 0), (ONE, 2, 0), (ONE, 1, 0)]),
                row([(ONE, 0, 1), (ONE, 0, 1), (ONE, 0, 1), (ONE, 0, 1)]),
                row([(ONE, 1, 1), (ONE, 2, 1), (NEG, 2, 1), (NEG, 1, 1)]),
            ],
        },
        StepExpectation {
            step: 4,
            qudit: Qudit::Two,
            rows: vec![
                // The photon absorbed in step 2 is re-emitted here, so this
                // row ends in |0⟩|1⟩c.
                row([(ONE, 0, 0), (I, 3, 0), (ONE, 2, 1), (ONE, 0, 1)]),
                row([(ONE, 1, 1), (ONE, 1, 1), (ONE, 1, 1), (ONE, 1, 1)]),
                row([(ONE, 2, 0), (ONE, 2, 0), (ONE, 2, 0), (ONE, 0, 0)]),
                row([(ONE, 1, 0), (ONE, 1, 0), (ONE, 1, 0), (ONE, 1, 0)]),
            ],
        },
        StepExpectation {
            step: 5,
            qudit: Qudit::One,
            rows: vec![
                row([(ONE, 0, 1), (NEG, 2, 1), (I, 3, 0), (NEG_I, 1, 0)]),
                row([(ONE, 2, 0), (ONE, 0, 0), (ONE, 0, 0), (ONE, 0, 0)]),
            ],
        },
    ]
}

/// Outcome of replaying one sub-operation of one table row with the
/// spectator qudits parked at the given levels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionCheck {
    pub tag: StepTag,
    pub row: usize,
    pub spectators: [usize; 2],
    /// Max amplitude deviation from the expected ket.
    pub error: f64,
}

fn composite(q: Qudit, spectators: [usize; 2], ket: LocalKet) -> BasisLabel {
    let mut levels = [0; 3];
    let mut others = spectators.into_iter();
    for o in Qudit::ALL {
        levels[o.slot()] = if o == q { ket.level } else { others.next().unwrap() };
    }
    BasisLabel {
        levels,
        photons: ket.photons,
    }
}

/// Replay every table row through the compiled schedule, with spectator
/// qudits in each of their computational levels {0, 1}.
pub fn check_step_expectations(cfg: &ProtocolConfig) -> Result<Vec<TransitionCheck>> {
    let space = cfg.space();
    let schedule = compile_ccz_schedule(cfg);
    let props = SchedulePropagators::build(&schedule, cfg, Exec::default())?;
    let mut checks = Vec::new();
    for table in step_expectations() {
        let offset = schedule
            .segments()
            .iter()
            .position(|s| s.tag == Some(StepTag::new(table.step, SubOp::A)))
            .expect("compiled schedule has every step");
        for (r, row) in table.rows.iter().enumerate() {
            for spectators in [[0, 0], [0, 1], [1, 0], [1, 1]] {
                let input = StateVector::basis(space, composite(table.qudit, spectators, row.input()))?;
                let mut psi = input;
                for (j, sub) in SubOp::ALL.into_iter().enumerate() {
                    psi = props.unitaries()[offset + j].apply(&psi)?;
                    let want = row.after(sub);
                    let target = StateVector::basis(space, composite(table.qudit, spectators, want))?;
                    let expected = target.amplitudes() * want.coeff;
                    let error = (psi.amplitudes() - expected).camax();
                    checks.push(TransitionCheck {
                        tag: StepTag::new(table.step, sub),
                        row: r,
                        spectators,
                        error,
                    });
                }
            }
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients_have_unit_modulus() {
        for table in step_expectations() {
            for row in &table.rows {
                assert_eq!(row.input().coeff, ONE);
                for ket in row.chain {
                    assert!((ket.coeff.norm() - 1.0).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn tables_cover_every_step() {
        let tables = step_expectations();
        let rows: Vec<usize> = tables.iter().map(|t| t.rows.len()).collect();
        assert_eq!(rows, vec![2, 4, 4, 4, 2]);
        let first = &tables[0].rows[0];
        assert_eq!(first.after(SubOp::C), k(I, 0, 1));
        let last = &tables[4].rows[0];
        assert_eq!(last.after(SubOp::C), k(NEG_I, 1, 0));
    }

    #[test]
    fn tables_replay_exactly() {
        let cfg = ProtocolConfig::reference();
        let checks = check_step_expectations(&cfg).unwrap();
        assert_eq!(checks.len(), (2 + 4 + 4 + 4 + 2) * 4 * 3);
        for c in checks {
            assert!(c.error < 1e-10, "{c:?}");
        }
    }
}
