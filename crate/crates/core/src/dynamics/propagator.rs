use super::{JcCoupling, PulseDrive};
use crate::hilbert::{embed_qudit_operator, CompositeSpace, Operator, LEVELS};
use crate::linalg::{expm_blockwise, hermitian_deviation, max_abs};
use crate::{CMatrix, Result, SimError, C64};

/// Closed-form `exp(-i H_JC t)`: a cos/−i·sin rotation inside every doublet
/// `{|3, n⟩, |2, n+1⟩}` at frequency `g√(n+1)`, identity on all dark states.
pub fn jc_propagator_closed(space: &CompositeSpace, coupling: JcCoupling, t: f64) -> Result<Operator> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(SimError::invalid(
            "t",
            format!("duration must be non-negative, got {t}"),
        ));
    }
    let dim = space.dim();
    let n_max = space.n_max();
    let q = coupling.qudit;
    let mut u = CMatrix::identity(dim, dim);
    for (idx, label) in space.labels().enumerate() {
        if label.level(q) == 3 && label.photons + 1 < n_max {
            let partner = space
                .index(label.with_level(q, 2).with_photons(label.photons + 1))
                .expect("partner state is in range");
            let theta = coupling.g * ((label.photons + 1) as f64).sqrt() * t;
            let (s, c) = theta.sin_cos();
            u[(idx, idx)] = C64::new(c, 0.0);
            u[(partner, partner)] = C64::new(c, 0.0);
            u[(partner, idx)] = C64::new(0.0, -s);
            u[(idx, partner)] = C64::new(0.0, -s);
        }
    }
    Ok(Operator::new(u))
}

/// The 4×4 single-qudit rotation produced by a resonant pulse:
///
/// ```text
/// |i⟩ → cos(Ωt)|i⟩ − i e^{−iφ} sin(Ωt)|j⟩
/// |j⟩ → cos(Ωt)|j⟩ − i e^{+iφ} sin(Ωt)|i⟩
/// ```
pub fn pulse_rotation_local(drive: &PulseDrive) -> CMatrix {
    let (i, j) = (drive.transition.lower(), drive.transition.upper());
    let (s, c) = (drive.rabi * drive.duration).sin_cos();
    let minus_i = C64::new(0.0, -1.0);
    let mut u = CMatrix::identity(LEVELS, LEVELS);
    u[(i, i)] = C64::new(c, 0.0);
    u[(j, j)] = C64::new(c, 0.0);
    u[(j, i)] = minus_i * C64::from_polar(s, -drive.phase);
    u[(i, j)] = minus_i * C64::from_polar(s, drive.phase);
    u
}

/// Closed-form pulse propagator embedded in the composite space.
pub fn pulse_propagator_closed(space: &CompositeSpace, drive: &PulseDrive) -> Result<Operator> {
    let local = pulse_rotation_local(drive);
    Ok(Operator::new(
        embed_qudit_operator(space, drive.qudit, &local)?.into_inner(),
    ))
}

/// `exp(-iHt)` by Padé scaling-and-squaring on each connected block of `H`.
/// Serves as the independent check on the closed forms and as the
/// propagator for Hamiltonians without one.
pub fn evolve_numeric(h: &Operator, t: f64) -> Result<Operator> {
    let m = h.entries();
    let dev = hermitian_deviation(m);
    if dev > 1e-12 * max_abs(m).max(1.0) {
        return Err(SimError::NotHermitian { deviation: dev });
    }
    if !t.is_finite() {
        return Err(SimError::invalid("t", "duration must be finite"));
    }
    let generator = m * C64::new(0.0, -t);
    Ok(Operator::new(expm_blockwise(&generator)))
}
