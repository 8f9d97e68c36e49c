use super::gate::{GateMatrix, LOGICAL_DIM};
use crate::dynamics::LindbladOptions;
use crate::hilbert::DensityMatrix;
use crate::protocol::{compile_ccz_schedule, ProtocolConfig, ScheduleGenerators};
use crate::{CMatrix, Exec, Result, C64};

/// Gate quality of a projected 8×8 map against a target unitary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityReport {
    /// `|Tr(target†·actual)|² / 64`.
    pub process_fidelity: f64,
    /// `(8·F_p + 1) / 9`.
    pub avg_gate_fidelity: f64,
    pub leakage: f64,
    /// After global-phase alignment.
    pub max_elementwise_error: f64,
}

pub fn avg_from_process(process_fidelity: f64) -> f64 {
    let d = LOGICAL_DIM as f64;
    (d * process_fidelity + 1.0) / (d + 1.0)
}

fn overlap(actual: &GateMatrix, target: &GateMatrix) -> C64 {
    target
        .entries()
        .iter()
        .zip(actual.entries().iter())
        .map(|(t, a)| t.conj() * a)
        .sum()
}

/// Multiply `actual` by the unit phase maximizing `Re Tr(target†·actual)`.
/// Returns the aligned matrix and the phase removed.
pub fn align_global_phase(actual: &GateMatrix, target: &GateMatrix) -> (GateMatrix, f64) {
    let tr = overlap(actual, target);
    let theta = if tr.norm() > 0.0 { tr.arg() } else { 0.0 };
    (actual.scaled(C64::from_polar(1.0, -theta)), theta)
}

pub fn gate_fidelities(actual: &GateMatrix, target: &GateMatrix) -> FidelityReport {
    let d = LOGICAL_DIM as f64;
    let process_fidelity = (overlap(actual, target).norm_sqr() / (d * d)).clamp(0.0, 1.0);
    let (aligned, _) = align_global_phase(actual, target);
    FidelityReport {
        process_fidelity,
        avg_gate_fidelity: avg_from_process(process_fidelity),
        leakage: actual.leakage(),
        max_elementwise_error: aligned.max_elementwise_diff(target),
    }
}

/// Channel quality under the Lindblad dynamics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelReport {
    pub process_fidelity: f64,
    pub avg_gate_fidelity: f64,
    /// Trace lost from logical ⊗ vacuum, averaged over the 8 basis inputs.
    pub leakage: f64,
    /// Smallest eigenvalue of the uniform-superposition state observed
    /// after any segment.
    pub min_eigenvalue: f64,
    pub integration_steps: usize,
}

/// Process fidelity of the open-system gate against `target`, from the 36
/// independent evolutions of `|j⟩⟨k|` with `j ≤ k` (the rest follow by
/// Hermitian conjugation):
///
/// ```text
/// F_p = (1/64) Σ_jk ⟨j| U† E(|j⟩⟨k|) U |k⟩
/// ```
pub fn channel_fidelity(cfg: &ProtocolConfig, target: &GateMatrix) -> Result<ChannelReport> {
    channel_fidelity_with(cfg, target, &LindbladOptions::default(), Exec::default())
}

pub fn channel_fidelity_with(
    cfg: &ProtocolConfig,
    target: &GateMatrix,
    opts: &LindbladOptions,
    exec: Exec,
) -> Result<ChannelReport> {
    let space = cfg.space();
    let dim = space.dim();
    let logical = space.logical_indices(cfg.encoding());
    let gens = ScheduleGenerators::build(&compile_ccz_schedule(cfg), cfg)?;

    let pairs: Vec<(usize, usize)> = (0..LOGICAL_DIM)
        .flat_map(|j| (j..LOGICAL_DIM).map(move |k| (j, k)))
        .collect();
    let project = |m: &CMatrix| CMatrix::from_fn(LOGICAL_DIM, LOGICAL_DIM, |r, c| m[(logical[r], logical[c])]);
    let blocks = exec.map(&pairs, |&(j, k)| {
        let mut rho = CMatrix::zeros(dim, dim);
        rho[(logical[j], logical[k])] = C64::new(1.0, 0.0);
        project(&gens.evolve(rho, opts))
    });

    // A genuine state, to watch positivity along the way.
    let mut plus = CMatrix::zeros(dim, dim);
    let w = C64::new(1.0 / LOGICAL_DIM as f64, 0.0);
    for &a in &logical {
        for &b in &logical {
            plus[(a, b)] = w;
        }
    }
    let mut min_eigenvalue = f64::INFINITY;
    gens.evolve_observed(plus, opts, |_, rho| {
        let lowest = DensityMatrix::from_matrix_unchecked(rho.clone()).eigenvalues()[0];
        min_eigenvalue = min_eigenvalue.min(lowest);
    });

    let u = target.entries();
    let u_adj = u.adjoint();
    let mut acc = C64::new(0.0, 0.0);
    let mut retained = 0.0;
    for (&(j, k), m) in pairs.iter().zip(&blocks) {
        let forward = (&u_adj * m * u)[(j, k)];
        if j == k {
            acc += forward;
            retained += m.trace().re;
        } else {
            // E(|k⟩⟨j|) = E(|j⟩⟨k|)†
            let backward = (&u_adj * m.adjoint() * u)[(k, j)];
            acc += forward + backward;
        }
    }
    let d = LOGICAL_DIM as f64;
    let process_fidelity = (acc.re / (d * d)).clamp(0.0, 1.0);
    Ok(ChannelReport {
        process_fidelity,
        avg_gate_fidelity: avg_from_process(process_fidelity),
        leakage: (1.0 - retained / d).max(0.0),
        min_eigenvalue,
        integration_steps: gens.total_steps(opts),
    })
}
