//! Composite Hilbert space of three four-level systems and one truncated
//! cavity mode.
//!
//! Basis ordering is row-major over `(l1, l2, l3, n)`:
//!
//! ```text
//! index = ((l1·4 + l2)·4 + l3)·n_max + n
//! ```

use std::fmt;

use crate::linalg::{hermitian_deviation, max_abs_diff};
use crate::{CMatrix, CVector, Result, SimError, C64};

/// Levels per system.
pub const LEVELS: usize = 4;

/// One of the three four-level systems. Qudits 1 and 2 are the controls,
/// qudit 3 the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Qudit {
    One,
    Two,
    Three,
}

impl Qudit {
    pub const ALL: [Qudit; 3] = [Qudit::One, Qudit::Two, Qudit::Three];

    /// 1-based label.
    pub fn id(self) -> usize {
        self.slot() + 1
    }

    /// 0-based position in the tensor product.
    pub fn slot(self) -> usize {
        match self {
            Qudit::One => 0,
            Qudit::Two => 1,
            Qudit::Three => 2,
        }
    }

    pub fn from_id(id: usize) -> Result<Self> {
        match id {
            1 => Ok(Qudit::One),
            2 => Ok(Qudit::Two),
            3 => Ok(Qudit::Three),
            other => Err(SimError::InvalidQudit(other)),
        }
    }
}

impl fmt::Display for Qudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuditSpec {
    pub id: Qudit,
}

impl QuditSpec {
    pub const DIM: usize = LEVELS;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CavitySpec {
    n_max: usize,
}

impl CavitySpec {
    /// Fock states `0..n_max`.
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(SimError::invalid(
                "n_max",
                format!("cavity truncation must be at least 2, got {n_max}"),
            ));
        }
        Ok(CavitySpec { n_max })
    }

    pub fn n_max(self) -> usize {
        self.n_max
    }
}

impl Default for CavitySpec {
    fn default() -> Self {
        CavitySpec { n_max: 3 }
    }
}

/// Logical bit → physical level label, per qudit.
///
/// The target system's computational states sit on its two lowest levels
/// in reversed energy order, but the dynamics only ever see labels, so the
/// stored map is label-to-label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LogicalEncoding {
    map: [[usize; 2]; 3],
}

impl LogicalEncoding {
    pub fn new(map: [[usize; 2]; 3]) -> Result<Self> {
        for pair in &map {
            for &level in pair {
                if level >= LEVELS {
                    return Err(SimError::LevelOutOfRange { level });
                }
            }
            if pair[0] == pair[1] {
                return Err(SimError::invalid(
                    "encoding",
                    "logical 0 and 1 must map to distinct levels",
                ));
            }
        }
        Ok(LogicalEncoding { map })
    }

    pub fn level(&self, qudit: Qudit, bit: u8) -> usize {
        self.map[qudit.slot()][usize::from(bit & 1)]
    }
}

impl Default for LogicalEncoding {
    fn default() -> Self {
        LogicalEncoding {
            map: [[0, 1], [0, 1], [0, 1]],
        }
    }
}

/// A basis label `|l1 l2 l3⟩|n⟩c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub levels: [usize; 3],
    pub photons: usize,
}

impl BasisLabel {
    pub fn new(l1: usize, l2: usize, l3: usize, photons: usize) -> Self {
        BasisLabel {
            levels: [l1, l2, l3],
            photons,
        }
    }

    pub fn level(&self, q: Qudit) -> usize {
        self.levels[q.slot()]
    }

    pub fn with_level(mut self, q: Qudit, level: usize) -> Self {
        self.levels[q.slot()] = level;
        self
    }

    pub fn with_photons(mut self, photons: usize) -> Self {
        self.photons = photons;
        self
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.levels;
        write!(f, "|{a}{b}{c}⟩|{}⟩c", self.photons)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompositeSpace {
    pub qudits: [QuditSpec; 3],
    pub cavity: CavitySpec,
}

impl CompositeSpace {
    pub fn new(cavity: CavitySpec) -> Self {
        CompositeSpace {
            qudits: Qudit::ALL.map(|id| QuditSpec { id }),
            cavity,
        }
    }

    pub fn with_n_max(n_max: usize) -> Result<Self> {
        Ok(Self::new(CavitySpec::new(n_max)?))
    }

    pub fn n_max(&self) -> usize {
        self.cavity.n_max
    }

    pub fn dim(&self) -> usize {
        LEVELS * LEVELS * LEVELS * self.cavity.n_max
    }

    pub fn index(&self, label: BasisLabel) -> Result<usize> {
        let [l1, l2, l3] = label.levels;
        basis_index(self, l1, l2, l3, label.photons)
    }

    pub fn label(&self, index: usize) -> Result<BasisLabel> {
        if index >= self.dim() {
            return Err(SimError::DimensionMismatch {
                expected: self.dim(),
                found: index + 1,
            });
        }
        let n_max = self.n_max();
        let photons = index % n_max;
        let rest = index / n_max;
        Ok(BasisLabel::new(rest / 16, (rest / 4) % 4, rest % 4, photons))
    }

    /// Iterate all basis labels in index order.
    pub fn labels(&self) -> impl Iterator<Item = BasisLabel> + '_ {
        (0..self.dim()).map(|i| self.label(i).expect("index within dim"))
    }

    /// Index of the logical product state `|b1 b2 b3⟩|0⟩c`.
    pub fn logical_index(&self, encoding: &LogicalEncoding, bits: [u8; 3]) -> usize {
        let levels = [
            encoding.level(Qudit::One, bits[0]),
            encoding.level(Qudit::Two, bits[1]),
            encoding.level(Qudit::Three, bits[2]),
        ];
        self.index(BasisLabel { levels, photons: 0 })
            .expect("encoded levels are in range")
    }

    /// Composite indices of the eight logical states in order |000⟩..|111⟩.
    pub fn logical_indices(&self, encoding: &LogicalEncoding) -> [usize; 8] {
        std::array::from_fn(|k| self.logical_index(encoding, logical_bits(k)))
    }
}

/// Bits `(b1, b2, b3)` of logical index `k`, with qudit 1 most significant.
pub fn logical_bits(k: usize) -> [u8; 3] {
    [((k >> 2) & 1) as u8, ((k >> 1) & 1) as u8, (k & 1) as u8]
}

/// Flat index of `|l1 l2 l3⟩|n⟩c`.
pub fn basis_index(space: &CompositeSpace, l1: usize, l2: usize, l3: usize, n: usize) -> Result<usize> {
    for level in [l1, l2, l3] {
        if level >= LEVELS {
            return Err(SimError::LevelOutOfRange { level });
        }
    }
    let n_max = space.n_max();
    if n >= n_max {
        return Err(SimError::PhotonOutOfRange { n, n_max });
    }
    Ok(((l1 * LEVELS + l2) * LEVELS + l3) * n_max + n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    pub fn from_vector(amplitudes: CVector) -> Self {
        StateVector { amplitudes }
    }

    pub fn basis(space: &CompositeSpace, label: BasisLabel) -> Result<Self> {
        let mut v = CVector::zeros(space.dim());
        v[space.index(label)?] = C64::new(1.0, 0.0);
        Ok(StateVector { amplitudes: v })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_inner(self) -> CVector {
        self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn amplitude(&self, space: &CompositeSpace, label: BasisLabel) -> Result<C64> {
        Ok(self.amplitudes[space.index(label)?])
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Pure-state projector `|ψ⟩⟨ψ|`.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            entries: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }

    /// Reduced 4×4 density matrix of one qudit.
    pub fn reduced_qudit(&self, space: &CompositeSpace, q: Qudit) -> CMatrix {
        self.to_density().reduced_qudit(space, q)
    }

    /// Photon-number distribution of the cavity.
    pub fn photon_distribution(&self, space: &CompositeSpace) -> Vec<f64> {
        let n_max = space.n_max();
        let mut p = vec![0.0; n_max];
        for (i, a) in self.amplitudes.iter().enumerate() {
            p[i % n_max] += a.norm_sqr();
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
}

impl DensityMatrix {
    /// Wrap a matrix, checking the density-matrix invariants
    /// (Hermitian within 1e-12, unit trace within 1e-10).
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(SimError::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        let dev = hermitian_deviation(&entries);
        if dev > 1e-12 {
            return Err(SimError::NotHermitian { deviation: dev });
        }
        let tr = entries.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(SimError::invalid("rho", format!("trace {tr} is not 1")));
        }
        Ok(DensityMatrix { entries })
    }

    /// Wrap without validation; used for evolved states whose invariants
    /// hold only to integration accuracy.
    pub fn from_matrix_unchecked(entries: CMatrix) -> Self {
        DensityMatrix { entries }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_inner(self) -> CMatrix {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn population(&self, index: usize) -> f64 {
        self.entries[(index, index)].re
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.entries + self.entries.adjoint()).scale(0.5);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// Trace distance ½‖ρ − σ‖₁.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.entries - &other.entries;
        let herm = (&diff + diff.adjoint()).scale(0.5);
        0.5 * herm.symmetric_eigenvalues().iter().map(|x| x.abs()).sum::<f64>()
    }

    pub fn reduced_qudit(&self, space: &CompositeSpace, q: Qudit) -> CMatrix {
        let mut out = CMatrix::zeros(LEVELS, LEVELS);
        for (i, li) in space.labels().enumerate() {
            for (j, lj) in space.labels().enumerate() {
                let same_rest = li.photons == lj.photons
                    && Qudit::ALL
                        .iter()
                        .filter(|&&o| o != q)
                        .all(|&o| li.level(o) == lj.level(o));
                if same_rest {
                    out[(li.level(q), lj.level(q))] += self.entries[(i, j)];
                }
            }
        }
        out
    }

    pub fn photon_distribution(&self, space: &CompositeSpace) -> Vec<f64> {
        let n_max = space.n_max();
        let mut p = vec![0.0; n_max];
        for i in 0..self.dim() {
            p[i % n_max] += self.entries[(i, i)].re;
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    entries: CMatrix,
    hermitian: bool,
}

impl Operator {
    pub fn new(entries: CMatrix) -> Self {
        Operator {
            entries,
            hermitian: false,
        }
    }

    /// Mark as Hermitian, checking `‖A − A†‖_max < 1e-12` relative to the
    /// operator's scale.
    pub fn hermitian(entries: CMatrix) -> Result<Self> {
        let dev = hermitian_deviation(&entries);
        let scale = crate::linalg::max_abs(&entries).max(1.0);
        if dev > 1e-12 * scale {
            return Err(SimError::NotHermitian { deviation: dev });
        }
        Ok(Operator {
            entries,
            hermitian: true,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Operator {
            entries: CMatrix::identity(dim, dim),
            hermitian: true,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Operator {
            entries: CMatrix::zeros(dim, dim),
            hermitian: true,
        }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_inner(self) -> CMatrix {
        self.entries
    }

    pub fn is_hermitian_flagged(&self) -> bool {
        self.hermitian
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(SimError::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        Ok(StateVector::from_vector(&self.entries * psi.amplitudes()))
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            entries: self.entries.adjoint(),
            hermitian: self.hermitian,
        }
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Operator) -> Operator {
        Operator::new(&self.entries * &rhs.entries)
    }

    pub fn commutes_with(&self, other: &Operator, tol: f64) -> bool {
        let ab = &self.entries * &other.entries;
        let ba = &other.entries * &self.entries;
        max_abs_diff(&ab, &ba) < tol
    }
}

impl std::ops::Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        Operator {
            entries: &self.entries + &rhs.entries,
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

/// `I ⊗ … ⊗ local ⊗ … ⊗ I_cavity` with `local` on `target`.
pub fn embed_qudit_operator(space: &CompositeSpace, target: Qudit, local: &CMatrix) -> Result<Operator> {
    if local.shape() != (LEVELS, LEVELS) {
        return Err(SimError::DimensionMismatch {
            expected: LEVELS,
            found: local.nrows().max(local.ncols()),
        });
    }
    let dim = space.dim();
    let mut out = CMatrix::zeros(dim, dim);
    for (col, label) in space.labels().enumerate() {
        let from = label.level(target);
        for to in 0..LEVELS {
            let v = local[(to, from)];
            if v != C64::new(0.0, 0.0) {
                let row = space.index(label.with_level(target, to))?;
                out[(row, col)] = v;
            }
        }
    }
    let herm = hermitian_deviation(local) == 0.0;
    Ok(Operator {
        entries: out,
        hermitian: herm,
    })
}

/// `I ⊗ I ⊗ I ⊗ local`.
pub fn embed_cavity_operator(space: &CompositeSpace, local: &CMatrix) -> Result<Operator> {
    let n_max = space.n_max();
    if local.shape() != (n_max, n_max) {
        return Err(SimError::DimensionMismatch {
            expected: n_max,
            found: local.nrows().max(local.ncols()),
        });
    }
    let dim = space.dim();
    let mut out = CMatrix::zeros(dim, dim);
    for block in 0..dim / n_max {
        let base = block * n_max;
        for r in 0..n_max {
            for c in 0..n_max {
                out[(base + r, base + c)] = local[(r, c)];
            }
        }
    }
    let herm = hermitian_deviation(local) == 0.0;
    Ok(Operator {
        entries: out,
        hermitian: herm,
    })
}

/// Local `|i⟩⟨j|` on a four-level system.
pub fn ket_bra(i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(LEVELS, LEVELS);
    m[(i, j)] = C64::new(1.0, 0.0);
    m
}

/// Truncated annihilation operator `a` on `n_max` Fock states.
pub fn annihilation(n_max: usize) -> CMatrix {
    let mut a = CMatrix::zeros(n_max, n_max);
    for n in 1..n_max {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Truncated creation operator `a⁺`.
pub fn creation(n_max: usize) -> CMatrix {
    annihilation(n_max).adjoint()
}

/// `|b1 b2 b3⟩|0⟩c` with each qudit at its encoded level.
pub fn logical_basis_state(space: &CompositeSpace, encoding: &LogicalEncoding, bits: [u8; 3]) -> Result<StateVector> {
    if bits.iter().any(|&b| b > 1) {
        return Err(SimError::invalid("bits", format!("{bits:?} is not a bit triple")));
    }
    let mut v = CVector::zeros(space.dim());
    v[space.logical_index(encoding, bits)] = C64::new(1.0, 0.0);
    Ok(StateVector::from_vector(v))
}

/// Projector onto span{|b1 b2 b3⟩|0⟩c}.
pub fn logical_projector(space: &CompositeSpace, encoding: &LogicalEncoding) -> Operator {
    let dim = space.dim();
    let mut p = CMatrix::zeros(dim, dim);
    for idx in space.logical_indices(encoding) {
        p[(idx, idx)] = C64::new(1.0, 0.0);
    }
    Operator {
        entries: p,
        hermitian: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn space(n_max: usize) -> CompositeSpace {
        CompositeSpace::with_n_max(n_max).unwrap()
    }

    #[test]
    fn basis_index_examples() {
        let s = space(2);
        assert_eq!(basis_index(&s, 0, 0, 0, 0).unwrap(), 0);
        assert_eq!(basis_index(&s, 3, 3, 3, 1).unwrap(), 127);
        assert_eq!(basis_index(&s, 1, 1, 1, 0).unwrap(), 42);
        assert_eq!(s.dim(), 128);
        assert_eq!(space(3).dim(), 192);
    }

    #[test]
    fn basis_index_rejects_out_of_range() {
        let s = space(2);
        assert_eq!(basis_index(&s, 4, 0, 0, 0), Err(SimError::LevelOutOfRange { level: 4 }));
        assert_eq!(
            basis_index(&s, 0, 0, 0, 2),
            Err(SimError::PhotonOutOfRange { n: 2, n_max: 2 })
        );
        assert!(CavitySpec::new(1).is_err());
        assert!(Qudit::from_id(0).is_err());
        assert!(s.label(128).is_err());
    }

    proptest! {
        #[test]
        fn index_round_trip(l1 in 0usize..4, l2 in 0usize..4, l3 in 0usize..4, n_max in 2usize..6, n_seed in 0usize..100) {
            let s = space(n_max);
            let label = BasisLabel::new(l1, l2, l3, n_seed % n_max);
            let idx = s.index(label).unwrap();
            prop_assert!(idx < s.dim());
            prop_assert_eq!(s.label(idx).unwrap(), label);
        }
    }

    #[test]
    fn embed_identity_and_ladder() {
        let s = space(2);
        let id = embed_qudit_operator(&s, Qudit::Two, &CMatrix::identity(4, 4)).unwrap();
        assert_eq!(id.entries(), &CMatrix::identity(s.dim(), s.dim()));
        assert!(id.is_hermitian_flagged());

        let lower = embed_qudit_operator(&s, Qudit::One, &ket_bra(2, 3)).unwrap();
        let psi = StateVector::basis(&s, BasisLabel::new(3, 0, 0, 0)).unwrap();
        let out = lower.apply(&psi).unwrap();
        assert_eq!(out, StateVector::basis(&s, BasisLabel::new(2, 0, 0, 0)).unwrap());
        assert!(!lower.is_hermitian_flagged());
    }

    fn local_matrix() -> impl Strategy<Value = CMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16)
            .prop_map(|v| CMatrix::from_iterator(4, 4, v.into_iter().map(|(re, im)| C64::new(re, im))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn embedding_is_a_homomorphism_and_sites_commute(a in local_matrix(), b in local_matrix(), site in 0usize..3) {
            let s = space(3);
            let q = Qudit::ALL[site];
            let ea = embed_qudit_operator(&s, q, &a).unwrap();
            let eb = embed_qudit_operator(&s, q, &b).unwrap();
            let eab = embed_qudit_operator(&s, q, &(&a * &b)).unwrap();
            prop_assert!(max_abs_diff(ea.compose(&eb).entries(), eab.entries()) < 1e-12);

            let other = embed_qudit_operator(&s, Qudit::ALL[(site + 1) % 3], &b).unwrap();
            let cav = embed_cavity_operator(&s, &annihilation(3)).unwrap();
            prop_assert!(ea.commutes_with(&other, 1e-12));
            prop_assert!(ea.commutes_with(&cav, 1e-12));
        }
    }

    #[test]
    fn cavity_operators() {
        let s = space(3);
        let a = embed_cavity_operator(&s, &annihilation(3)).unwrap();
        let one = StateVector::basis(&s, BasisLabel::new(0, 1, 2, 1)).unwrap();
        let zero = StateVector::basis(&s, BasisLabel::new(0, 1, 2, 0)).unwrap();
        assert_eq!(a.apply(&one).unwrap(), zero);
        assert_eq!(a.apply(&zero).unwrap().norm(), 0.0);

        let adag = embed_cavity_operator(&s, &creation(3)).unwrap();
        let number = adag.compose(&a);
        let n_one = one.inner(&number.apply(&one).unwrap());
        assert!((n_one - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(embed_cavity_operator(&s, &annihilation(2)).is_err());
    }

    #[test]
    fn logical_states_are_orthonormal() {
        let s = space(2);
        let enc = LogicalEncoding::default();
        let states: Vec<_> = (0..8)
            .map(|k| logical_basis_state(&s, &enc, logical_bits(k)).unwrap())
            .collect();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(b).re - expected).abs() < 1e-15);
            }
        }
        let all_ones = &states[7];
        assert_eq!(
            all_ones.amplitude(&s, BasisLabel::new(1, 1, 1, 0)).unwrap(),
            C64::new(1.0, 0.0)
        );
        assert!(logical_basis_state(&s, &enc, [2, 0, 0]).is_err());
    }

    #[test]
    fn logical_projector_is_idempotent_rank_eight() {
        let s = space(3);
        let p = logical_projector(&s, &LogicalEncoding::default());
        let p2 = p.compose(&p);
        assert!(max_abs_diff(p2.entries(), p.entries()) < 1e-12);
        assert!((p.entries().trace().re - 8.0).abs() < 1e-12);
    }

    #[test]
    fn encoding_validation() {
        assert!(LogicalEncoding::new([[0, 1], [0, 1], [1, 1]]).is_err());
        assert!(LogicalEncoding::new([[0, 4], [0, 1], [0, 1]]).is_err());
        let swapped = LogicalEncoding::new([[0, 1], [0, 1], [1, 0]]).unwrap();
        assert_eq!(swapped.level(Qudit::Three, 1), 0);
    }

    #[test]
    fn reduced_states_and_density_checks() {
        let s = space(2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = CVector::zeros(s.dim());
        v[s.index(BasisLabel::new(0, 0, 1, 0)).unwrap()] = C64::new(h, 0.0);
        v[s.index(BasisLabel::new(0, 1, 1, 1)).unwrap()] = C64::new(0.0, h);
        let psi = StateVector::from_vector(v);
        let r3 = psi.reduced_qudit(&s, Qudit::Three);
        assert!((r3[(1, 1)].re - 1.0).abs() < 1e-15);
        let r2 = psi.reduced_qudit(&s, Qudit::Two);
        assert!((r2[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!(r2[(0, 1)].norm() < 1e-15, "entangled with cavity, no coherence");
        for p in psi.photon_distribution(&s) {
            assert!((p - 0.5).abs() < 1e-15);
        }

        let rho = DensityMatrix::new(psi.to_density().into_inner()).unwrap();
        assert!(rho.eigenvalues()[0] > -1e-12);
        assert!(rho.trace_distance(&rho) < 1e-12);
        assert!(DensityMatrix::new(CMatrix::identity(4, 4)).is_err());
    }
}
