//! Fixed-step Taylor-series integration (classic RK4 at order 4) of
//!
//! ```text
//! dρ/dt = −i[H, ρ] + Σ_L (L ρ L† − ½{L†L, ρ})
//! ```
//!
//! written as `−i(H_eff ρ − ρ H_eff†) + Σ_L L ρ L†` with
//! `H_eff = H − (i/2) Σ L†L`. All operators involved are very sparse, so
//! products go through [`SparseRows`].

use super::{CollapseKind, CollapseOperator};
use crate::hilbert::{
    annihilation, embed_cavity_operator, embed_qudit_operator, ket_bra, CompositeSpace, DensityMatrix, Operator,
};
use crate::linalg::{norm_inf, SparseRows};
use crate::{CMatrix, Result, SimError, C64};

/// Fixed-step integration settings.
///
/// Each step applies the degree-`order` Taylor polynomial of `exp(dt·L)`.
/// The generator is constant within a segment, so `order = 4` is exactly
/// classic RK4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LindbladOptions {
    /// Upper bound on `Λ·dt`, where `Λ = 2‖H_eff‖∞ + Σ‖L‖∞²` bounds the
    /// generator in the induced ∞-norm. The local error is at most
    /// `(Λ·dt)^(order+1) / (order+1)!`.
    pub max_phase_per_step: f64,
    pub order: usize,
}

impl Default for LindbladOptions {
    /// Order 16 with `Λ·dt ≤ 1`: local error below 3e−15, about five times
    /// fewer generator applications than RK4 at `Λ·dt = 0.05`.
    fn default() -> Self {
        LindbladOptions {
            max_phase_per_step: 1.0,
            order: 16,
        }
    }
}

impl LindbladOptions {
    pub fn rk4(max_phase_per_step: f64) -> Self {
        LindbladOptions {
            max_phase_per_step,
            order: 4,
        }
    }

    pub fn taylor(order: usize, max_phase_per_step: f64) -> Self {
        LindbladOptions {
            max_phase_per_step,
            order: order.max(1),
        }
    }
}

/// A static Lindblad generator, precomputed for repeated stepping.
#[derive(Clone, Debug)]
pub struct Lindbladian {
    h_eff: SparseRows,
    jumps: Vec<Vec<(usize, usize, C64)>>,
    generator_bound: f64,
}

fn collapse_matrix(space: &CompositeSpace, c: &CollapseOperator) -> Result<CMatrix> {
    if !(c.rate >= 0.0 && c.rate.is_finite()) {
        return Err(SimError::NegativeRate {
            channel: c.channel_name(),
            rate: c.rate,
        });
    }
    let qudit = || {
        c.qudit
            .ok_or_else(|| SimError::invalid(c.channel_name(), "level-3 channel needs a qudit"))
    };
    let op = match c.kind {
        CollapseKind::Level3Relaxation { target } => {
            if target >= 3 {
                return Err(SimError::invalid(
                    "relaxation_target",
                    format!("level 3 cannot relax into level {target}"),
                ));
            }
            embed_qudit_operator(space, qudit()?, &(ket_bra(target, 3) * C64::from(c.rate.sqrt())))?
        }
        CollapseKind::Level3Dephasing => {
            embed_qudit_operator(space, qudit()?, &(ket_bra(3, 3) * C64::from((2.0 * c.rate).sqrt())))?
        }
        CollapseKind::CavityDecay => {
            embed_cavity_operator(space, &(annihilation(space.n_max()) * C64::from(c.rate.sqrt())))?
        }
    };
    Ok(op.into_inner())
}

impl Lindbladian {
    pub fn new(space: &CompositeSpace, h: &Operator, collapses: &[CollapseOperator]) -> Result<Self> {
        let dim = space.dim();
        if h.dim() != dim {
            return Err(SimError::DimensionMismatch {
                expected: dim,
                found: h.dim(),
            });
        }
        let mut h_eff = h.entries().clone();
        let mut jumps = Vec::new();
        let mut jump_bound = 0.0;
        for c in collapses {
            let l = collapse_matrix(space, c)?;
            if c.rate == 0.0 {
                continue;
            }
            let ldl = l.adjoint() * &l;
            h_eff -= ldl * C64::new(0.0, 0.5);
            jump_bound += norm_inf(&l).powi(2);
            jumps.push(SparseRows::from_dense(&l).triplets().collect());
        }
        let generator_bound = 2.0 * norm_inf(&h_eff) + jump_bound;
        Ok(Lindbladian {
            h_eff: SparseRows::from_dense(&h_eff),
            jumps,
            generator_bound,
        })
    }

    pub fn dim(&self) -> usize {
        self.h_eff.dim()
    }

    /// Bound on the generator's norm used for step-size selection.
    pub fn generator_bound(&self) -> f64 {
        self.generator_bound
    }

    /// `dρ/dt`. Linear in `ρ`, so any matrix (not only a state) may be passed.
    pub fn derivative(&self, rho: &CMatrix) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        self.h_eff.mul_left_acc(rho, C64::new(0.0, -1.0), &mut out);
        self.h_eff.mul_right_adjoint_acc(rho, C64::new(0.0, 1.0), &mut out);
        let rs = rho.as_slice();
        let os = out.as_mut_slice();
        for jump in &self.jumps {
            for &(j, l, b) in jump {
                let bc = b.conj();
                for &(i, k, a) in jump {
                    os[i + j * n] += a * bc * rs[k + l * n];
                }
            }
        }
        out
    }

    pub fn rk4_step(&self, rho: &CMatrix, dt: f64) -> CMatrix {
        let half = C64::from(0.5 * dt);
        let k1 = self.derivative(rho);
        let k2 = self.derivative(&(rho + &k1 * half));
        let k3 = self.derivative(&(rho + &k2 * half));
        let k4 = self.derivative(&(rho + &k3 * C64::from(dt)));
        rho + (k1 + (k2 + k3) * C64::from(2.0) + k4) * C64::from(dt / 6.0)
    }

    /// `Σ_{k≤order} (dt·L)^k ρ / k!`
    pub fn taylor_step(&self, rho: &CMatrix, dt: f64, order: usize) -> CMatrix {
        let mut acc = rho.clone();
        let mut term = rho.clone();
        for k in 1..=order {
            term = self.derivative(&term) * C64::from(dt / k as f64);
            acc += &term;
        }
        acc
    }

    /// Number of equal steps used to cover `t`.
    pub fn steps_for(&self, t: f64, opts: &LindbladOptions) -> usize {
        if t <= 0.0 {
            return 0;
        }
        ((self.generator_bound * t / opts.max_phase_per_step).ceil() as usize).max(1)
    }

    /// Integrate over `t` with equal steps chosen by [`Self::steps_for`].
    pub fn evolve(&self, rho: CMatrix, t: f64, opts: &LindbladOptions) -> CMatrix {
        let steps = self.steps_for(t, opts);
        if steps == 0 {
            return rho;
        }
        let dt = t / steps as f64;
        if opts.order == 4 {
            (0..steps).fold(rho, |r, _| self.rk4_step(&r, dt))
        } else {
            (0..steps).fold(rho, |r, _| self.taylor_step(&r, dt, opts.order))
        }
    }
}

/// One RK4 step of the master equation.
pub fn lindblad_step(
    space: &CompositeSpace,
    rho: &DensityMatrix,
    h: &Operator,
    collapses: &[CollapseOperator],
    dt: f64,
) -> Result<DensityMatrix> {
    if rho.dim() != space.dim() {
        return Err(SimError::DimensionMismatch {
            expected: space.dim(),
            found: rho.dim(),
        });
    }
    let generator = Lindbladian::new(space, h, collapses)?;
    Ok(DensityMatrix::from_matrix_unchecked(
        generator.rk4_step(rho.entries(), dt),
    ))
}
