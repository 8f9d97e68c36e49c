use std::fmt;

use crate::hilbert::{logical_bits, StateVector};
use crate::linalg::{max_abs_diff, unitarity_deviation};
use crate::protocol::{compile_ccz_schedule, ProtocolConfig, SchedulePropagators};
use crate::{CMatrix, CVector, Exec, Result, SimError, C64};

/// Logical dimension of three qubits.
pub const LOGICAL_DIM: usize = 8;

/// An 8×8 matrix on the logical basis |000⟩..|111⟩, qubit 1 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct GateMatrix {
    entries: CMatrix,
}

impl GateMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.shape() != (LOGICAL_DIM, LOGICAL_DIM) {
            return Err(SimError::DimensionMismatch {
                expected: LOGICAL_DIM,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(GateMatrix { entries })
    }

    pub fn identity() -> Self {
        GateMatrix {
            entries: CMatrix::identity(LOGICAL_DIM, LOGICAL_DIM),
        }
    }

    /// diag(1, 1, 1, 1, 1, 1, 1, −1).
    pub fn ccz() -> Self {
        let mut g = Self::identity();
        g.entries[(7, 7)] = C64::new(-1.0, 0.0);
        g
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_inner(self) -> CMatrix {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.entries)
    }

    pub fn max_elementwise_diff(&self, other: &GateMatrix) -> f64 {
        max_abs_diff(&self.entries, &other.entries)
    }

    /// Norm lost from the logical subspace, averaged over the 8 basis inputs.
    pub fn leakage(&self) -> f64 {
        let retained: f64 = self.entries.column_iter().map(|c| c.norm_squared()).sum();
        (1.0 - retained / LOGICAL_DIM as f64).max(0.0)
    }

    /// `self · rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &GateMatrix) -> GateMatrix {
        GateMatrix {
            entries: &self.entries * &rhs.entries,
        }
    }

    pub fn scaled(&self, factor: C64) -> GateMatrix {
        GateMatrix {
            entries: &self.entries * factor,
        }
    }
}

impl fmt::Display for GateMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..LOGICAL_DIM {
            let [a, b, c] = logical_bits(r);
            write!(f, "{a}{b}{c} |")?;
            for col in 0..LOGICAL_DIM {
                let z = self.entries[(r, col)];
                write!(f, " {:+.3}{:+.3}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Run the compiled schedule on each logical input and project the output
/// onto logical ⊗ vacuum.
pub fn extract_gate(cfg: &ProtocolConfig) -> Result<GateMatrix> {
    extract_gate_with(cfg, Exec::default())
}

pub fn extract_gate_with(cfg: &ProtocolConfig, exec: Exec) -> Result<GateMatrix> {
    let space = cfg.space();
    let sched = compile_ccz_schedule(cfg);
    let props = SchedulePropagators::build(&sched, cfg, exec)?;
    let logical = space.logical_indices(cfg.encoding());
    let mut entries = CMatrix::zeros(LOGICAL_DIM, LOGICAL_DIM);
    for (k, &input) in logical.iter().enumerate() {
        let mut psi = CVector::zeros(space.dim());
        psi[input] = C64::new(1.0, 0.0);
        let out = props.apply(&StateVector::from_vector(psi))?;
        for (r, &idx) in logical.iter().enumerate() {
            entries[(r, k)] = out.amplitudes()[idx];
        }
    }
    GateMatrix::new(entries)
}
