//! Hybrid states, inverse Gram-Schmidt compression and classification.
//!
//! A [`HybridState`] is a finite mixture of superpositions of product kets.
//! Each subsystem ("slot") is either a qudit, addressed by basis level, or a
//! qumode, addressed by a [`SymbolicKet`]. Compression replaces the kets of
//! every qumode slot by their coordinates in an orthonormal basis of their
//! span, giving an exact finite-dimensional density matrix.

use num_complex::Complex64;

use crate::composite::DensityMatrix;
use crate::error::{invalid, Error, Result};
use crate::kets::{braket, SymbolicKet};
use crate::linalg::{cr, hermitian_defect, kron_vec, CMatrix, CVector};

/// Squared residual below which a ket is treated as linearly dependent.
pub const DEPENDENCE_TOL: f64 = 1e-12;
/// Tolerance on probabilities and per-term norms.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Qudit(usize),
    Qumode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    Level(usize),
    Ket(SymbolicKet),
}

/// One product ket with its amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub coeff: Complex64,
    pub factors: Vec<Factor>,
}

impl Branch {
    pub fn new(coeff: Complex64, factors: Vec<Factor>) -> Self {
        Branch { coeff, factors }
    }

    /// Qudit level followed by a qumode ket.
    pub fn hybrid(coeff: Complex64, level: usize, ket: SymbolicKet) -> Self {
        Branch::new(coeff, vec![Factor::Level(level), Factor::Ket(ket)])
    }
}

/// A pure superposition carried with probability `prob`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub prob: f64,
    pub branches: Vec<Branch>,
}

impl Term {
    pub fn new(prob: f64, branches: Vec<Branch>) -> Self {
        Term { prob, branches }
    }
}

/// Where the state came from. `Infinite` marks states that belong to an
/// infinite family of qumode kets and cannot be compressed exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Finite,
    Infinite(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridState {
    slots: Vec<Slot>,
    terms: Vec<Term>,
    family: Family,
}

impl HybridState {
    /// Validated constructor: factors match slots, probabilities are positive
    /// and sum to one, and every term is a unit vector.
    pub fn new(slots: Vec<Slot>, terms: Vec<Term>) -> Result<Self> {
        if slots.is_empty() {
            return invalid("hybrid state needs at least one slot");
        }
        if terms.is_empty() {
            return invalid("hybrid state needs at least one term");
        }
        for s in &slots {
            if let Slot::Qudit(d) = s {
                if *d < 2 {
                    return invalid(format!("qudit dimension {d} below 2"));
                }
            }
        }
        let mut psum = 0.0;
        for t in &terms {
            if !(t.prob > 0.0) {
                return invalid(format!("term probability {} is not positive", t.prob));
            }
            if t.branches.is_empty() {
                return invalid("term without branches");
            }
            for b in &t.branches {
                check_factors(&slots, &b.factors)?;
            }
            psum += t.prob;
        }
        if (psum - 1.0).abs() > NORM_TOL {
            return invalid(format!("term probabilities sum to {psum}"));
        }
        for (k, t) in terms.iter().enumerate() {
            let n = term_norm_sqr(&t.branches);
            if (n - 1.0).abs() > NORM_TOL {
                return invalid(format!("term {k} has norm² {n}"));
            }
        }
        Ok(HybridState {
            slots,
            terms,
            family: Family::Finite,
        })
    }

    /// Qudit of dimension `d` paired with one qumode; each branch is
    /// `(coefficient, level, ket)`.
    pub fn bipartite(d: usize, terms: Vec<(f64, Vec<(Complex64, usize, SymbolicKet)>)>) -> Result<Self> {
        let terms = terms
            .into_iter()
            .map(|(p, bs)| Term::new(p, bs.into_iter().map(|(c, l, k)| Branch::hybrid(c, l, k)).collect()))
            .collect();
        HybridState::new(vec![Slot::Qudit(d), Slot::Qumode], terms)
    }

    /// Single pure superposition rescaled to unit norm.
    pub fn normalized_pure(slots: Vec<Slot>, branches: Vec<Branch>) -> Result<Self> {
        for b in &branches {
            check_factors(&slots, &b.factors)?;
        }
        let n = term_norm_sqr(&branches);
        if !(n > 1e-14) {
            return Err(Error::DegenerateNormalization(format!("superposition norm² {n:e}")));
        }
        let s = 1.0 / n.sqrt();
        let branches = branches
            .into_iter()
            .map(|b| Branch::new(b.coeff * s, b.factors))
            .collect();
        HybridState::new(slots, vec![Term::new(1.0, branches)])
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Distinct kets in a qumode slot, in order of first appearance.
    pub fn kets_in_slot(&self, slot: usize) -> Vec<SymbolicKet> {
        let mut out: Vec<SymbolicKet> = Vec::new();
        for t in &self.terms {
            for b in &t.branches {
                if let Some(Factor::Ket(k)) = b.factors.get(slot) {
                    if !out.contains(k) {
                        out.push(*k);
                    }
                }
            }
        }
        out
    }

    /// Truncation per qumode slot large enough for every ket in it.
    pub fn default_cutoffs(&self) -> Vec<usize> {
        self.qumode_slots()
            .map(|s| self.kets_in_slot(s).iter().map(|k| k.auto_cutoff()).max().unwrap_or(1))
            .collect()
    }

    fn qumode_slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Slot::Qumode)
            .map(|(i, _)| i)
    }

    /// Density matrix on truncated Fock spaces, one cutoff per qumode slot
    /// in slot order. Each term is renormalized after truncation.
    pub fn fock_density(&self, cutoffs: &[usize]) -> Result<DensityMatrix> {
        let n_modes = self.qumode_slots().count();
        if cutoffs.len() != n_modes {
            return invalid(format!("expected {n_modes} cutoffs, got {}", cutoffs.len()));
        }
        let mut dims = Vec::with_capacity(self.slots.len());
        let mut next = cutoffs.iter();
        for s in &self.slots {
            dims.push(match s {
                Slot::Qudit(d) => *d,
                Slot::Qumode => next.next().copied().unwrap_or(0) + 1,
            });
        }
        let parts: Vec<(f64, CVector)> = self
            .terms
            .iter()
            .map(|t| {
                let v = term_vector(&t.branches, &dims, |slot, f| match f {
                    Factor::Ket(k) => k.fock_amplitudes(dims[slot] - 1),
                    Factor::Level(_) => unreachable!(),
                });
                let n = v.norm();
                (t.prob, v / cr(n))
            })
            .collect();
        DensityMatrix::from_mixture(&parts, dims)
    }
}

fn check_factors(slots: &[Slot], factors: &[Factor]) -> Result<()> {
    if factors.len() != slots.len() {
        return invalid(format!(
            "branch has {} factors for {} slots",
            factors.len(),
            slots.len()
        ));
    }
    for (s, f) in slots.iter().zip(factors) {
        match (s, f) {
            (Slot::Qudit(d), Factor::Level(l)) if l < d => {}
            (Slot::Qudit(d), Factor::Level(l)) => {
                return invalid(format!("level {l} out of range for qudit of dimension {d}"))
            }
            (Slot::Qumode, Factor::Ket(_)) => {}
            _ => return invalid("factor kind does not match slot kind"),
        }
    }
    Ok(())
}

fn factor_overlap(bra: &Factor, ket: &Factor) -> Complex64 {
    match (bra, ket) {
        (Factor::Level(a), Factor::Level(b)) => cr(if a == b { 1.0 } else { 0.0 }),
        (Factor::Ket(a), Factor::Ket(b)) => braket(a, b),
        _ => cr(0.0),
    }
}

/// Squared norm of a superposition, from ket overlaps.
pub fn branch_norm_sqr(branches: &[Branch]) -> f64 {
    term_norm_sqr(branches)
}

fn term_norm_sqr(branches: &[Branch]) -> f64 {
    let mut acc = cr(0.0);
    for bi in branches {
        for bj in branches {
            let ov: Complex64 = bi
                .factors
                .iter()
                .zip(&bj.factors)
                .map(|(x, y)| factor_overlap(x, y))
                .product();
            acc += bi.coeff.conj() * bj.coeff * ov;
        }
    }
    acc.re
}

/// `Σ_b c_b ⊗_s v_s(b)` where qudit levels map to basis vectors and kets
/// map through `ket_vec(slot, factor)`.
fn term_vector(branches: &[Branch], dims: &[usize], ket_vec: impl Fn(usize, &Factor) -> CVector) -> CVector {
    let total: usize = dims.iter().product();
    let mut out = CVector::zeros(total);
    for b in branches {
        let mut v = CVector::from_element(1, cr(1.0));
        for (slot, f) in b.factors.iter().enumerate() {
            let part = match f {
                Factor::Level(l) => {
                    let mut e = CVector::zeros(dims[slot]);
                    e[*l] = cr(1.0);
                    e
                }
                Factor::Ket(_) => ket_vec(slot, f),
            };
            v = kron_vec(&v, &part);
        }
        out += v * b.coeff;
    }
    out
}

/// Coordinates of non-orthogonal kets in an orthonormal basis of their span.
///
/// Row `i` of `a` expands ket `i`; column `k` is basis vector `k`, which was
/// opened by ket `pivots[k]`. Rows are lower-triangular in pivot order.
#[derive(Debug, Clone, PartialEq)]
pub struct GramCoefficients {
    pub a: CMatrix,
    pub basis_size: usize,
    pub pivots: Vec<usize>,
}

/// Solve `A A† = G` for lower-triangular `A` with real positive diagonal,
/// where `gram[(i, j)] = ⟨ψ_j|ψ_i⟩`. Kets whose squared residual is below
/// [`DEPENDENCE_TOL`] open no new basis vector.
pub fn inverse_gram_schmidt(gram: &CMatrix) -> Result<GramCoefficients> {
    let n = gram.nrows();
    if gram.ncols() != n {
        return invalid("Gram matrix must be square");
    }
    if hermitian_defect(gram) > 1e-10 {
        return invalid("Gram matrix is not Hermitian");
    }
    for i in 0..n {
        if (gram[(i, i)].re - 1.0).abs() > 1e-10 {
            return invalid(format!("Gram diagonal entry {i} is {}", gram[(i, i)]));
        }
    }
    let mut a = CMatrix::zeros(n, n);
    let mut pivots: Vec<usize> = Vec::new();
    for i in 0..n {
        let mut weight = 0.0;
        for (k, &p) in pivots.iter().enumerate() {
            let mut x = gram[(i, p)];
            for l in 0..k {
                x -= a[(p, l)].conj() * a[(i, l)];
            }
            x /= a[(p, k)];
            a[(i, k)] = x;
            weight += x.norm_sqr();
        }
        let residual = gram[(i, i)].re - weight;
        if residual > DEPENDENCE_TOL {
            a[(i, pivots.len())] = cr(residual.sqrt());
            pivots.push(i);
        }
    }
    let r = pivots.len();
    Ok(GramCoefficients {
        a: a.columns(0, r).into_owned(),
        basis_size: r,
        pivots,
    })
}

/// `gram[(i, j)] = ⟨k_j|k_i⟩` from analytic overlaps.
pub fn gram_matrix(kets: &[SymbolicKet]) -> CMatrix {
    let n = kets.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { cr(1.0) } else { braket(&kets[j], &kets[i]) })
}

/// Output of [`compression`].
#[derive(Debug, Clone)]
pub struct Compression {
    pub rho: DensityMatrix,
    /// Pure components `(p, |v⟩)` of the compressed mixture.
    pub components: Vec<(f64, CVector)>,
    /// Distinct kets and their coefficients, one entry per qumode slot.
    pub bases: Vec<(usize, Vec<SymbolicKet>, GramCoefficients)>,
}

impl Compression {
    pub fn dims(&self) -> &[usize] {
        self.rho.dims()
    }
}

/// Exact finite-dimensional representation of a hybrid state.
pub fn compress(state: &HybridState) -> Result<DensityMatrix> {
    Ok(compression(state)?.rho)
}

pub fn compression(state: &HybridState) -> Result<Compression> {
    let mut bases = Vec::new();
    let mut dims = Vec::with_capacity(state.slots.len());
    for (slot, s) in state.slots.iter().enumerate() {
        match s {
            Slot::Qudit(d) => dims.push(*d),
            Slot::Qumode => {
                let kets = state.kets_in_slot(slot);
                let g = inverse_gram_schmidt(&gram_matrix(&kets))?;
                dims.push(g.basis_size);
                bases.push((slot, kets, g));
            }
        }
    }
    let row_of = |slot: usize, f: &Factor| -> CVector {
        let (_, kets, g) = bases.iter().find(|(s, _, _)| *s == slot).expect("qumode slot basis");
        let Factor::Ket(k) = f else { unreachable!() };
        let i = kets.iter().position(|x| x == k).expect("ket registered");
        g.a.row(i).transpose()
    };
    let mut components = Vec::with_capacity(state.terms.len());
    let total: usize = dims.iter().product();
    let mut entries = CMatrix::zeros(total, total);
    for t in &state.terms {
        let v = term_vector(&t.branches, &dims, row_of);
        entries += &v * v.adjoint() * cr(t.prob);
        components.push((t.prob, v));
    }
    let rho = DensityMatrix::trusted(entries, dims);
    if (rho.trace() - 1.0).abs() > 1e-9 {
        return Err(Error::NumericInconsistency(format!(
            "compressed trace {} differs from 1",
            rho.trace()
        )));
    }
    Ok(Compression { rho, components, bases })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    PureDVLike,
    MixedDVLike(usize),
    TrulyHybrid,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::PureDVLike => write!(f, "PureDVLike"),
            Classification::MixedDVLike(n) => write!(f, "MixedDVLike({n})"),
            Classification::TrulyHybrid => write!(f, "TrulyHybrid"),
        }
    }
}

/// Anything that can be sorted into the three hybrid-entanglement classes.
pub trait Classify {
    fn classification(&self) -> Classification;
}

impl Classify for HybridState {
    fn classification(&self) -> Classification {
        match (&self.family, self.terms.len()) {
            (Family::Infinite(_), _) => Classification::TrulyHybrid,
            (Family::Finite, 1) => Classification::PureDVLike,
            (Family::Finite, n) => Classification::MixedDVLike(n),
        }
    }
}

pub fn classify(state: &impl Classify) -> Classification {
    state.classification()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn coh(a: f64) -> SymbolicKet {
        SymbolicKet::coherent(cr(a))
    }

    #[test]
    fn identity_gram_gives_identity() {
        let g = inverse_gram_schmidt(&CMatrix::identity(4, 4)).unwrap();
        assert_eq!(g.basis_size, 4);
        assert!((g.a - CMatrix::identity(4, 4)).norm() < 1e-15);
    }

    #[test]
    fn three_ket_rows() {
        let kets = [coh(0.3), SymbolicKet::coherent(c(-0.2, 0.5)), coh(1.1)];
        let gram = gram_matrix(&kets);
        let g = inverse_gram_schmidt(&gram).unwrap();
        assert!((&g.a * g.a.adjoint() - &gram).norm() < 1e-12);
        let c1 = braket(&kets[0], &kets[1]);
        let c2 = braket(&kets[0], &kets[2]);
        let c3 = braket(&kets[1], &kets[2]);
        let d = (1.0 - c1.norm_sqr()).sqrt();
        let m = c3 - c1.conj() * c2;
        let want = [c2, m / d, cr((1.0 - c2.norm_sqr() - m.norm_sqr() / d / d).sqrt())];
        for (k, w) in want.iter().enumerate() {
            assert!((g.a[(2, k)] - w).norm() < 1e-12);
        }
    }

    #[test]
    fn dependent_ket_reduces_dimension() {
        let kets = [coh(0.0), coh(0.7), SymbolicKet::Fock(0)];
        let g = inverse_gram_schmidt(&gram_matrix(&kets)).unwrap();
        assert_eq!(g.basis_size, 2);
        assert_eq!(g.pivots, vec![0, 1]);
        assert!((g.a.row(2) - g.a.row(0)).norm() < 1e-12);
    }

    #[test]
    fn qubit_qumode_compresses_to_two_qubits() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let st = HybridState::bipartite(2, vec![(1.0, vec![(cr(s), 0, coh(0.8)), (cr(s), 1, coh(-0.8))])]).unwrap();
        let comp = compression(&st).unwrap();
        assert_eq!(comp.dims(), &[2, 2]);
        let n = (-2.0 * 0.64f64).exp();
        let a = &comp.bases[0].2.a;
        assert!((a[(1, 0)] - cr(n)).norm() < 1e-12);
        assert!((a[(1, 1)] - cr((1.0 - n * n).sqrt())).norm() < 1e-12);
        assert_eq!(classify(&st), Classification::PureDVLike);
    }

    #[test]
    fn compression_matches_fock_density_overlaps() {
        let st = HybridState::bipartite(
            2,
            vec![
                (0.4, vec![(cr(1.0), 0, coh(0.5))]),
                (0.6, vec![(cr(0.6), 0, coh(0.5)), (c(0.0, 0.8), 1, coh(-0.5))]),
            ],
        )
        .unwrap();
        assert_eq!(classify(&st), Classification::MixedDVLike(2));
        let comp = compress(&st).unwrap();
        let fock = st.fock_density(&st.default_cutoffs()).unwrap();
        let p1 = crate::composite::purity(&comp);
        let p2 = crate::composite::purity(&fock);
        assert!((p1 - p2).abs() < 1e-10);
    }

    #[test]
    fn rejects_malformed_states() {
        assert!(HybridState::bipartite(2, vec![(1.0, vec![(cr(1.0), 2, coh(0.0))])]).is_err());
        assert!(HybridState::bipartite(2, vec![(0.5, vec![(cr(1.0), 0, coh(0.0))])]).is_err());
        assert!(HybridState::bipartite(2, vec![(1.0, vec![(cr(0.5), 0, coh(0.0))])]).is_err());
        let r = HybridState::normalized_pure(
            vec![Slot::Qumode],
            vec![
                Branch::new(cr(1.0), vec![Factor::Ket(coh(0.0))]),
                Branch::new(cr(-1.0), vec![Factor::Ket(coh(0.0))]),
            ],
        );
        assert!(matches!(r, Err(Error::DegenerateNormalization(_))));
    }
}
