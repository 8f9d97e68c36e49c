//! State of the whole register after each of the five steps, for all eight
//! logical inputs, compared with hand-written kets.

use ccz_core::hilbert::{BasisLabel, StateVector};
use ccz_core::protocol::{compile_ccz_schedule, ProtocolConfig, SchedulePropagators};
use ccz_core::{CVector, Exec, C64};
use std::f64::consts::PI;

type Ket = (C64, [usize; 3], usize);

const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

fn k(c: C64, levels: [usize; 3], n: usize) -> Ket {
    (c, levels, n)
}

/// Input followed by the state after steps 1..=5.
fn chains() -> Vec<[Ket; 6]> {
    vec![
        // photon-carrying branch (qudit 1 starts in |1⟩)
        [
            k(ONE, [1, 0, 0], 0),
            k(I, [0, 0, 0], 1),
            k(I, [0, 0, 0], 0),
            k(I, [0, 0, 0], 0),
            k(I, [0, 0, 0], 1),
            k(ONE, [1, 0, 0], 0),
        ],
        [
            k(ONE, [1, 0, 1], 0),
            k(I, [0, 0, 1], 1),
            k(I, [0, 0, 1], 0),
            k(I, [0, 0, 1], 0),
            k(I, [0, 0, 1], 1),
            k(ONE, [1, 0, 1], 0),
        ],
        [
            k(ONE, [1, 1, 0], 0),
            k(I, [0, 1, 0], 1),
            k(I, [0, 1, 0], 1),
            k(I, [0, 1, 0], 1),
            k(I, [0, 1, 0], 1),
            k(ONE, [1, 1, 0], 0),
        ],
        [
            k(ONE, [1, 1, 1], 0),
            k(I, [0, 1, 1], 1),
            k(I, [0, 1, 1], 1),
            k(-I, [0, 1, 1], 1),
            k(-I, [0, 1, 1], 1),
            k(-ONE, [1, 1, 1], 0),
        ],
        // vacuum branch (qudit 1 starts in |0⟩)
        [
            k(ONE, [0, 0, 0], 0),
            k(ONE, [2, 0, 0], 0),
            k(ONE, [2, 2, 0], 0),
            k(ONE, [2, 2, 0], 0),
            k(ONE, [2, 0, 0], 0),
            k(ONE, [0, 0, 0], 0),
        ],
        [
            k(ONE, [0, 0, 1], 0),
            k(ONE, [2, 0, 1], 0),
            k(ONE, [2, 2, 1], 0),
            k(ONE, [2, 2, 1], 0),
            k(ONE, [2, 0, 1], 0),
            k(ONE, [0, 0, 1], 0),
        ],
        [
            k(ONE, [0, 1, 0], 0),
            k(ONE, [2, 1, 0], 0),
            k(ONE, [2, 1, 0], 0),
            k(ONE, [2, 1, 0], 0),
            k(ONE, [2, 1, 0], 0),
            k(ONE, [0, 1, 0], 0),
        ],
        [
            k(ONE, [0, 1, 1], 0),
            k(ONE, [2, 1, 1], 0),
            k(ONE, [2, 1, 1], 0),
            k(ONE, [2, 1, 1], 0),
            k(ONE, [2, 1, 1], 0),
            k(ONE, [0, 1, 1], 0),
        ],
    ]
}

fn ket(cfg: &ProtocolConfig, (c, [a, b, d], n): Ket) -> StateVector {
    let basis = StateVector::basis(cfg.space(), BasisLabel::new(a, b, d, n)).unwrap();
    StateVector::from_vector(basis.amplitudes() * c)
}

fn max_modulus(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check(cfg: &ProtocolConfig) {
    let props = SchedulePropagators::build(&compile_ccz_schedule(cfg), cfg, Exec::default()).unwrap();
    for chain in chains() {
        let traj = props.trajectory(&ket(cfg, chain[0])).unwrap();
        assert_eq!(traj.len(), 15);
        for step in 1..=5 {
            let got = &traj[3 * step - 1];
            let want = ket(cfg, chain[step]);
            let err = max_modulus(&(got.amplitudes() - want.amplitudes()));
            assert!(err < 1e-10, "input {:?}, step {step}: error {err:e}", chain[0].1);
        }
    }
}

#[test]
fn chains_at_reference_parameters() {
    check(&ProtocolConfig::reference());
}

#[test]
fn chains_with_unequal_couplings_and_larger_cavity() {
    let cfg = ProtocolConfig::new([2.0 * PI * 200e6, 2.0 * PI * 310e6, 2.0 * PI * 165e6], 2.0 * PI * 4e9)
        .unwrap()
        .with_n_max(5)
        .unwrap();
    check(&cfg);
}
