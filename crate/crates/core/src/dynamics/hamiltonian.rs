use super::{JcCoupling, PulseDrive};
use crate::hilbert::{embed_qudit_operator, ket_bra, CompositeSpace, Operator};
use crate::{CMatrix, Result, C64};

/// `H = g (a⁺ σ₂₃⁻ + a σ₂₃⁺)` with `σ₂₃⁻ = |2⟩⟨3|`, acting on the coupled
/// qudit and the cavity. Couples `|3, n⟩ ↔ |2, n+1⟩` with strength `g√(n+1)`.
pub fn jc_hamiltonian(space: &CompositeSpace, coupling: JcCoupling) -> Operator {
    let dim = space.dim();
    let n_max = space.n_max();
    let q = coupling.qudit;
    let mut h = CMatrix::zeros(dim, dim);
    for (idx, label) in space.labels().enumerate() {
        if label.level(q) == 3 && label.photons + 1 < n_max {
            let partner = space
                .index(label.with_level(q, 2).with_photons(label.photons + 1))
                .expect("partner state is in range");
            let v = C64::new(coupling.g * ((label.photons + 1) as f64).sqrt(), 0.0);
            h[(partner, idx)] = v;
            h[(idx, partner)] = v;
        }
    }
    Operator::hermitian(h).expect("JC Hamiltonian is real symmetric")
}

/// Sum of the cavity couplings of all listed qudits.
pub fn jc_sum_hamiltonian(space: &CompositeSpace, couplings: &[JcCoupling]) -> Operator {
    couplings
        .iter()
        .map(|&c| jc_hamiltonian(space, c))
        .fold(Operator::zeros(space.dim()), |acc, h| &acc + &h)
}

/// `H = Ω (e^{iφ} |i⟩⟨j| + e^{-iφ} |j⟩⟨i|)` on the driven qudit.
pub fn pulse_hamiltonian(space: &CompositeSpace, drive: &PulseDrive) -> Result<Operator> {
    let (i, j) = (drive.transition.lower(), drive.transition.upper());
    let coupling = C64::from_polar(drive.rabi, drive.phase);
    let local = ket_bra(i, j) * coupling + ket_bra(j, i) * coupling.conj();
    let embedded = embed_qudit_operator(space, drive.qudit, &local)?;
    Operator::hermitian(embedded.into_inner())
}
