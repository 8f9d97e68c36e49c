//! The conventional CCZ circuit over {CZ, H, T, T†}: the T-gate Toffoli
//! network without its outer Hadamards, each CNOT written as H·CZ·H.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use super::gate::{GateMatrix, LOGICAL_DIM};
use crate::{CMatrix, Result, SimError, C64};

/// Qubits are numbered 1..=3, qubit 1 most significant in the logical index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateElement {
    Cz { control: usize, target: usize },
    H(usize),
    T(usize),
    Tdg(usize),
}

impl GateElement {
    fn qubits(&self) -> Vec<usize> {
        match *self {
            GateElement::Cz { control, target } => vec![control, target],
            GateElement::H(q) | GateElement::T(q) | GateElement::Tdg(q) => vec![q],
        }
    }
}

impl fmt::Display for GateElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateElement::Cz { control, target } => write!(f, "CZ(q{control},q{target})"),
            GateElement::H(q) => write!(f, "H(q{q})"),
            GateElement::T(q) => write!(f, "T(q{q})"),
            GateElement::Tdg(q) => write!(f, "T†(q{q})"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub cz: usize,
    pub h: usize,
    pub t_type: usize,
}

impl fmt::Display for GateCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CZ={} H={} T-type={}", self.cz, self.h, self.t_type)
    }
}

/// Elements in application order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GateCircuit {
    pub elements: Vec<GateElement>,
}

impl GateCircuit {
    pub fn new(elements: Vec<GateElement>) -> Self {
        GateCircuit { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn counts(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for e in &self.elements {
            match e {
                GateElement::Cz { .. } => c.cz += 1,
                GateElement::H(_) => c.h += 1,
                GateElement::T(_) | GateElement::Tdg(_) => c.t_type += 1,
            }
        }
        c
    }
}

pub fn build_ccz_decomposition() -> GateCircuit {
    use GateElement::*;
    let cnot = |control: usize, target: usize| [H(target), Cz { control, target }, H(target)];
    let mut e = Vec::with_capacity(25);
    e.extend(cnot(2, 3));
    e.push(Tdg(3));
    e.extend(cnot(1, 3));
    e.push(T(3));
    e.extend(cnot(2, 3));
    e.push(Tdg(3));
    e.extend(cnot(1, 3));
    e.push(T(2));
    e.push(T(3));
    e.extend(cnot(1, 2));
    e.push(T(1));
    e.push(Tdg(2));
    e.extend(cnot(1, 2));
    GateCircuit::new(e)
}

fn bit(index: usize, qubit: usize) -> usize {
    (index >> (3 - qubit)) & 1
}

fn check_qubit(q: usize) -> Result<()> {
    if (1..=3).contains(&q) {
        Ok(())
    } else {
        Err(SimError::InvalidQudit(q))
    }
}

fn single_qubit(q: usize, local: [[C64; 2]; 2]) -> CMatrix {
    CMatrix::from_fn(LOGICAL_DIM, LOGICAL_DIM, |r, c| {
        let others = !(1 << (3 - q)) & (LOGICAL_DIM - 1);
        if r & others == c & others {
            local[bit(r, q)][bit(c, q)]
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn element_matrix(e: &GateElement) -> Result<CMatrix> {
    for q in e.qubits() {
        check_qubit(q)?;
    }
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    Ok(match *e {
        GateElement::Cz { control, target } => {
            if control == target {
                return Err(SimError::invalid(
                    "CZ",
                    format!("control and target are both q{control}"),
                ));
            }
            CMatrix::from_fn(LOGICAL_DIM, LOGICAL_DIM, |r, c| {
                match (r == c, bit(r, control) & bit(r, target)) {
                    (false, _) => zero,
                    (true, 1) => -one,
                    (true, _) => one,
                }
            })
        }
        GateElement::H(q) => {
            let h = C64::new(FRAC_1_SQRT_2, 0.0);
            single_qubit(q, [[h, h], [h, -h]])
        }
        GateElement::T(q) => single_qubit(
            q,
            [[one, zero], [zero, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]],
        ),
        GateElement::Tdg(q) => single_qubit(
            q,
            [[one, zero], [zero, C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)]],
        ),
    })
}

/// Ordered product, first element rightmost.
pub fn circuit_unitary(circuit: &GateCircuit) -> Result<GateMatrix> {
    let mut u = CMatrix::identity(LOGICAL_DIM, LOGICAL_DIM);
    for e in &circuit.elements {
        u = element_matrix(e)? * u;
    }
    GateMatrix::new(u)
}
