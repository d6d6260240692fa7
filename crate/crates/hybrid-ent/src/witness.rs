//! Moment-matrix inseparability tests.
//!
//! Rows and columns of the moment matrix are labelled by multi-indices
//! `(i1, i2, i3, i4)` standing for `a†^{i1} a^{i2} b†^{i3} b^{i4}`. Entries are
//!
//! ```text
//! M_ij = ⟨ a†^{i2} a^{i1} a†^{j1} a^{j2}  ⊗  b†^{j4} b^{j3} b†^{i3} b^{i4} ⟩
//! ```
//!
//! which are the moments of the partially transposed state. A negative
//! principal minor proves the state is NPT and therefore entangled.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::channels::ThermalOutput;
use crate::composite::DensityMatrix;
use crate::compression::{Factor, HybridState, Slot};
use crate::error::{invalid, Error, Result};
use crate::fock::annihilation;
use crate::kets::{braket, SymbolicKet};
use crate::linalg::{binomial, cpowi, cr, det, factorial, hermitian_defect, CMatrix};

/// `(i1, i2, i3, i4)` for `a†^{i1} a^{i2} b†^{i3} b^{i4}`.
pub type MultiIndex = [usize; 4];

/// Exponents `(p, q, r, s)` of `x†^p x^q x†^r x^s` on one mode.
pub type Word = [usize; 4];

/// Determinant magnitudes at or below this are inconclusive.
pub const INCONCLUSIVE_BAND: f64 = 1e-12;

/// Rows `{1, b, ab}`.
pub const S1_ROWS: [MultiIndex; 3] = [[0, 0, 0, 0], [0, 0, 0, 1], [0, 1, 0, 1]];
/// Rows `{1, a, b}`.
pub const S2_ROWS: [MultiIndex; 3] = [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]];

/// Degree first, then lexicographic on `(i3, i4, i1, i2)`.
pub fn compare_indices(u: &MultiIndex, v: &MultiIndex) -> Ordering {
    let du: usize = u.iter().sum();
    let dv: usize = v.iter().sum();
    du.cmp(&dv)
        .then(u[2].cmp(&v[2]))
        .then(u[3].cmp(&v[3]))
        .then(u[0].cmp(&v[0]))
        .then(u[1].cmp(&v[1]))
}

/// All multi-indices up to `max_degree`, in matrix order.
pub fn ordered_indices(max_degree: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for i1 in 0..=max_degree {
        for i2 in 0..=max_degree - i1 {
            for i3 in 0..=max_degree - i1 - i2 {
                for i4 in 0..=max_degree - i1 - i2 - i3 {
                    out.push([i1, i2, i3, i4]);
                }
            }
        }
    }
    out.sort_by(compare_indices);
    out
}

/// Source of mixed moments `⟨A ⊗ B⟩` for one word on each mode.
pub trait MomentProvider {
    fn moment(&self, a: Word, b: Word) -> Complex64;
}

impl<F: Fn(Word, Word) -> Complex64> MomentProvider for F {
    fn moment(&self, a: Word, b: Word) -> Complex64 {
        self(a, b)
    }
}

#[derive(Debug, Clone)]
pub struct MomentMatrix {
    pub entries: CMatrix,
    pub index_map: Vec<MultiIndex>,
}

impl MomentMatrix {
    pub fn position(&self, idx: &MultiIndex) -> Option<usize> {
        self.index_map.iter().position(|x| x == idx)
    }

    /// Smallest eigenvalue; nonnegative for every PPT state.
    pub fn min_eigenvalue(&self) -> f64 {
        crate::linalg::herm_eigenvalues(&self.entries)[0]
    }
}

fn entry_words(u: &MultiIndex, v: &MultiIndex) -> (Word, Word) {
    ([u[1], u[0], v[0], v[1]], [v[3], v[2], u[2], u[3]])
}

/// Moment matrix over the given rows, which must be strictly increasing.
pub fn sv_submatrix(provider: &impl MomentProvider, rows: &[MultiIndex]) -> Result<MomentMatrix> {
    if rows.windows(2).any(|w| compare_indices(&w[0], &w[1]) != Ordering::Less) {
        return invalid("moment-matrix rows must be strictly increasing in the index order");
    }
    let n = rows.len();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = entry_words(&rows[i], &rows[j]);
            m[(i, j)] = provider.moment(a, b);
        }
    }
    let scale = m.iter().fold(1.0f64, |s, z| s.max(z.norm()));
    let defect = hermitian_defect(&m);
    if defect > 1e-8 * scale {
        return Err(Error::InconsistentMoments(format!(
            "moment matrix deviates from Hermitian by {defect:e}"
        )));
    }
    Ok(MomentMatrix {
        entries: m,
        index_map: rows.to_vec(),
    })
}

/// Full moment matrix up to `max_total_degree`.
pub fn sv_moment_matrix(provider: &impl MomentProvider, max_total_degree: usize) -> Result<MomentMatrix> {
    sv_submatrix(provider, &ordered_indices(max_total_degree))
}

/// Determinant of the principal submatrix on `rows` (positions in the matrix).
pub fn principal_minor(m: &MomentMatrix, rows: &[usize]) -> Result<f64> {
    if rows.windows(2).any(|w| w[0] >= w[1]) || rows.iter().any(|&r| r >= m.entries.nrows()) {
        return invalid("minor rows must be strictly increasing and in range");
    }
    let sub = CMatrix::from_fn(rows.len(), rows.len(), |i, j| m.entries[(rows[i], rows[j])]);
    let d = det(&sub);
    let scale = rows.iter().map(|&r| m.entries[(r, r)].norm().max(1.0)).product::<f64>();
    if d.im.abs() > 1e-10 * scale {
        return Err(Error::NumericInconsistency(format!(
            "minor has imaginary part {:e}",
            d.im
        )));
    }
    Ok(d.re)
}

/// Determinant over a fixed row set, e.g. [`S1_ROWS`].
pub fn determinant(provider: &impl MomentProvider, rows: &[MultiIndex]) -> Result<f64> {
    let m = sv_submatrix(provider, rows)?;
    principal_minor(&m, &(0..rows.len()).collect::<Vec<_>>())
}

/// `x†^p x^q x†^r x^s` on `|0⟩..|dim−1⟩`, evaluated on a space padded by
/// `pad` levels and cut back, so `pad ≥ 8` gives exact Fock matrix elements
/// for words up to degree eight.
pub fn word_matrix(dim: usize, pad: usize, w: Word) -> CMatrix {
    let big = dim + pad;
    let a = annihilation(big);
    let ad = a.adjoint();
    let mut m = CMatrix::identity(big, big);
    for (k, &e) in w.iter().enumerate() {
        let op = if k % 2 == 0 { &ad } else { &a };
        for _ in 0..e {
            m = &m * op;
        }
    }
    m.view((0, 0), (dim, dim)).into_owned()
}

/// `d × d` qudit operators: the Fock lowering operator cut at `d` levels.
/// `(a_d)^d = 0` and `[a_d, a_d†] = diag(1, …, 1, −(d−1))`.
pub fn qudit_mode_operators(d: usize) -> Result<(CMatrix, CMatrix)> {
    if d < 2 {
        return invalid(format!("qudit dimension {d} below 2"));
    }
    let a = annihilation(d);
    let ad = a.adjoint();
    Ok((a, ad))
}

/// How qudit operators are represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuditOps {
    /// `d × d` operators.
    Adapted,
    /// The qudit as the lowest `d` levels of a Fock space.
    Embedded,
}

impl QuditOps {
    fn pad(self) -> usize {
        match self {
            QuditOps::Adapted => 0,
            QuditOps::Embedded => 8,
        }
    }
}

/// Moments of a two-subsystem density matrix whose subsystems are Fock
/// truncations (or qudits).
pub struct DensityMoments<'a> {
    rho: &'a DensityMatrix,
    a_sub: usize,
    pads: [usize; 2],
}

impl<'a> DensityMoments<'a> {
    /// `a_sub` names the subsystem played by mode `a`; the other is `b`.
    /// Both are padded (exact Fock action) unless marked adapted.
    pub fn new(rho: &'a DensityMatrix, a_sub: usize) -> Result<Self> {
        if rho.dims().len() != 2 || a_sub > 1 {
            return invalid("moment evaluation needs a bipartite state and a valid role");
        }
        Ok(DensityMoments {
            rho,
            a_sub,
            pads: [8, 8],
        })
    }

    pub fn with_qudit_ops(mut self, subsystem: usize, ops: QuditOps) -> Self {
        self.pads[subsystem.min(1)] = ops.pad();
        self
    }
}

impl MomentProvider for DensityMoments<'_> {
    fn moment(&self, a: Word, b: Word) -> Complex64 {
        let dims = self.rho.dims();
        let (w0, w1) = if self.a_sub == 0 { (a, b) } else { (b, a) };
        let m0 = word_matrix(dims[0], self.pads[0], w0);
        let m1 = word_matrix(dims[1], self.pads[1], w1);
        let r = self.rho.entries();
        let (d0, d1) = (dims[0], dims[1]);
        let mut acc = cr(0.0);
        for x in 0..d0 {
            for xp in 0..d0 {
                let ax = m0[(xp, x)];
                if ax == cr(0.0) {
                    continue;
                }
                let mut inner = cr(0.0);
                for y in 0..d1 {
                    for yp in 0..d1 {
                        let by = m1[(yp, y)];
                        if by != cr(0.0) {
                            inner += r[(x * d1 + y, xp * d1 + yp)] * by;
                        }
                    }
                }
                acc += ax * inner;
            }
        }
        acc
    }
}

/// `⟨β| a†^p a^q a†^r a^s |α⟩` via normal ordering of `a^q a†^r`.
pub fn coherent_word(beta: Complex64, alpha: Complex64, w: Word) -> Complex64 {
    let [p, q, r, s] = w;
    let mut acc = cr(0.0);
    for j in 0..=q.min(r) {
        acc +=
            cpowi(beta.conj(), p + r - j) * cpowi(alpha, q - j + s) * (binomial(q, j) * binomial(r, j) * factorial(j));
    }
    crate::fock::overlap_coherent(alpha, beta) * acc
}

/// Moments of a [`HybridState`] with analytic coherent matrix elements.
/// Other ket kinds are evaluated on a converged Fock truncation.
pub struct HybridMoments<'a> {
    state: &'a HybridState,
    a_slot: usize,
    b_slot: usize,
    qudit_ops: QuditOps,
}

impl<'a> HybridMoments<'a> {
    pub fn new(state: &'a HybridState, a_slot: usize, b_slot: usize) -> Result<Self> {
        let n = state.slots().len();
        if a_slot >= n || b_slot >= n || a_slot == b_slot {
            return invalid("mode roles must name two distinct slots");
        }
        Ok(HybridMoments {
            state,
            a_slot,
            b_slot,
            qudit_ops: QuditOps::Adapted,
        })
    }

    /// Qumode as `a`, qudit as `b`, for a qudit-first bipartite state.
    pub fn qudit_qumode(state: &'a HybridState) -> Result<Self> {
        match state.slots() {
            [Slot::Qudit(_), Slot::Qumode] => HybridMoments::new(state, 1, 0),
            [Slot::Qumode, Slot::Qudit(_)] => HybridMoments::new(state, 0, 1),
            other => invalid(format!("expected one qudit and one qumode, got {other:?}")),
        }
    }

    pub fn with_qudit_ops(mut self, ops: QuditOps) -> Self {
        self.qudit_ops = ops;
        self
    }

    fn element(&self, slot: usize, bra: &Factor, ket: &Factor, w: Option<Word>) -> Complex64 {
        let Some(w) = w else {
            return match (bra, ket) {
                (Factor::Level(a), Factor::Level(b)) => cr(if a == b { 1.0 } else { 0.0 }),
                (Factor::Ket(a), Factor::Ket(b)) => braket(a, b),
                _ => cr(0.0),
            };
        };
        match (bra, ket, self.state.slots()[slot]) {
            (Factor::Level(lj), Factor::Level(li), Slot::Qudit(d)) => {
                word_matrix(d, self.qudit_ops.pad(), w)[(*lj, *li)]
            }
            (Factor::Ket(SymbolicKet::Coherent(b)), Factor::Ket(SymbolicKet::Coherent(a)), _) => {
                coherent_word(*b, *a, w)
            }
            (Factor::Ket(kb), Factor::Ket(ka), _) => {
                let n = kb.auto_cutoff().max(ka.auto_cutoff()) + 8;
                let m = word_matrix(n + 1, 8, w);
                let va = ka.fock_amplitudes(n);
                let vb = kb.fock_amplitudes(n);
                vb.dotc(&(m * va))
            }
            _ => cr(0.0),
        }
    }
}

impl MomentProvider for HybridMoments<'_> {
    fn moment(&self, a: Word, b: Word) -> Complex64 {
        let mut acc = cr(0.0);
        for t in self.state.terms() {
            for bi in &t.branches {
                for bj in &t.branches {
                    let mut prod = bj.coeff.conj() * bi.coeff;
                    for slot in 0..bi.factors.len() {
                        let w = if slot == self.a_slot {
                            Some(a)
                        } else if slot == self.b_slot {
                            Some(b)
                        } else {
                            None
                        };
                        prod *= self.element(slot, &bj.factors[slot], &bi.factors[slot], w);
                        if prod == cr(0.0) {
                            break;
                        }
                    }
                    acc += prod * t.prob;
                }
            }
        }
        acc
    }
}

/// Thermal-channel output: qumode as `a`, qudit as `b`, exact moments.
pub struct ThermalMoments<'a> {
    output: &'a ThermalOutput,
    qudit_ops: QuditOps,
}

impl<'a> ThermalMoments<'a> {
    pub fn new(output: &'a ThermalOutput) -> Self {
        ThermalMoments {
            output,
            qudit_ops: QuditOps::Adapted,
        }
    }

    pub fn with_qudit_ops(mut self, ops: QuditOps) -> Self {
        self.qudit_ops = ops;
        self
    }
}

impl MomentProvider for ThermalMoments<'_> {
    fn moment(&self, a: Word, b: Word) -> Complex64 {
        let Slot::Qudit(d) = self.output.input.slots()[0] else {
            return cr(0.0);
        };
        let bm = word_matrix(d, self.qudit_ops.pad(), b);
        let [p, q, r, s] = a;
        let mut acc = cr(0.0);
        for j in 0..=q.min(r) {
            let c = binomial(q, j) * binomial(r, j) * factorial(j);
            acc += self.output.moment(&bm, (p + r - j, q + s - j)) * c;
        }
        acc
    }
}

/// `Θ(x)` with `Θ(0) = ½`.
pub fn heaviside_half(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        0.0
    } else {
        0.5
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatDeterminants {
    pub s1: f64,
    pub s2: f64,
    pub selected: f64,
}

/// Closed-form determinants of the two-mode cat `|α,α⟩ + e^{iφ}|−α,−α⟩`,
/// written with `ε = e^{−4|α|²}` to avoid overflow.
pub fn cat_witness_determinants(alpha: Complex64, phi: f64) -> CatDeterminants {
    let a2 = alpha.norm_sqr();
    if a2 == 0.0 {
        return CatDeterminants {
            s1: 0.0,
            s2: 0.0,
            selected: 0.0,
        };
    }
    let eps = (-4.0 * a2).exp();
    let cp = phi.cos();
    let den = (1.0 + eps * cp).powi(3);
    let s1 = -4.0 * a2.powi(3) * eps * (eps - cp) / den;
    let s2 = -4.0 * a2 * a2 * eps * (eps + cp) / den;
    let selected = heaviside_half(snap((phi + std::f64::consts::PI).cos())) * s1 + heaviside_half(snap(cp)) * s2;
    CatDeterminants { s1, s2, selected }
}

/// Treat `cos` values within rounding of zero as zero.
fn snap(x: f64) -> f64 {
    if x.abs() < 1e-14 {
        0.0
    } else {
        x
    }
}

/// `(s1, s2)` for `(|0⟩|α⟩ + e^{iφ}|1⟩|−α⟩)/√2`.
pub fn qubit_qumode_determinants(alpha: Complex64) -> (f64, f64) {
    let a2 = alpha.norm_sqr();
    let eps = (-4.0 * a2).exp();
    (-a2 * eps / 2.0, a2 / 2.0 * (1.0 - eps))
}

/// `s1` of the same state with the qumode squeezed by `r`; the squeezing
/// phase drops out.
pub fn squeezed_s1(alpha: Complex64, r: f64) -> f64 {
    let a2 = alpha.norm_sqr();
    let eps = (-4.0 * a2).exp();
    let (ch, sh) = (r.cosh(), r.sinh());
    sh * sh / 4.0 - eps / 2.0 * a2 * ch * ch - eps / 8.0 * sh * sh
}

/// `s1` of the two-term 2×4 mixture.
pub fn mixed24_s1(p: f64, alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    a2 / 2.0 * (p * (1.0 - p) - (-4.0 * a2).exp() * (1.0 - 1.5 * p * (1.0 - p)))
}

/// `s1` after the thermal channel.
pub fn thermal_s1(alpha: f64, eta: f64, n_th: f64) -> f64 {
    let a2 = alpha * alpha;
    let eps = (-4.0 * a2).exp();
    (1.0 - eta) / 4.0 * n_th * (1.0 - eps / 2.0) - eta * a2 / 2.0 * eps
}

/// Largest thermal photon number at which `s1 < 0`; infinite when lossless.
pub fn thermal_threshold(alpha: f64, eta: f64) -> f64 {
    if eta >= 1.0 {
        return f64::INFINITY;
    }
    let a2 = alpha * alpha;
    4.0 * eta * a2 / ((1.0 - eta) * (2.0 * (4.0 * a2).exp() - 1.0))
}

/// Amplitude maximizing the thermal threshold, the root of
/// `(2 − 8α²) e^{4α²} = 1`.
pub fn optimal_alpha() -> f64 {
    bisect(|a| (2.0 - 8.0 * a * a) * (4.0 * a * a).exp() - 1.0, 0.05, 0.5)
}

/// Maximizer of `thermal_threshold(·, eta)`, found from the sign change of
/// its derivative.
pub fn optimal_alpha_for(eta: f64) -> f64 {
    let d = |a: f64| {
        let e = (4.0 * a * a).exp();
        let den = 2.0 * e - 1.0;
        let c = 4.0 * eta / (1.0 - eta);
        c * (2.0 * a * den - a * a * 16.0 * a * e) / (den * den)
    };
    bisect(d, 0.05, 0.5)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `Σ_{n≥1} √n yⁿ`, summed until the terms fall below `1e-18` of the total.
pub fn sqrt_series(y: f64) -> f64 {
    let mut acc = 0.0;
    let mut pow = 1.0;
    for n in 1..50_000_000usize {
        pow *= y;
        let term = (n as f64).sqrt() * pow;
        acc += term;
        if term < 1e-18 * acc.max(1e-300) && (n as f64) * (1.0 - y) > 1.0 {
            break;
        }
    }
    acc
}

/// Determinant values for the geometric mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricS1 {
    /// `s1` with the `√n` series summed numerically.
    pub s1: f64,
    /// `s1` with the series replaced by `Σ n yⁿ` (a lower bound on `s1`).
    pub s1_lower: f64,
    /// `s1` with the series replaced by `Σ yⁿ`; `s1 ≤ s1_bound`, so a
    /// negative bound certifies entanglement.
    pub s1_bound: f64,
}

pub fn geometric_mixture_s1(x: f64, alpha: f64) -> Result<GeometricS1> {
    if !(x > 0.0 && x < 1.0) {
        return invalid(format!("mixing parameter {x} outside (0, 1)"));
    }
    let e = (-2.0 * alpha * alpha).exp();
    let k = e * (1.0 - x) / (1.0 - x * e);
    let c = alpha * alpha / (2.0 * (1.0 - x));
    let pref = alpha * (1.0 - x) / x;
    let eval = |sa: f64, sb: f64| {
        let (a, b) = (pref * sa, pref * sb);
        c / 2.0 - b * b / 4.0 - k * k * c / 4.0 - k * a * b / 4.0 - a * a / 8.0
    };
    let xe = x * e;
    let s1 = eval(sqrt_series(xe), sqrt_series(x));
    let s1_lower = eval(xe / (1.0 - xe).powi(2), x / (1.0 - x).powi(2));
    let s1_bound = alpha * alpha / 8.0
        * (2.0 * x / (1.0 - x)
            - ((1.0 - x) / (1.0 - xe)).powi(2) * (-4.0 * alpha * alpha).exp() * (3.0 + 1.0 / (1.0 - x)));
    Ok(GeometricS1 { s1, s1_lower, s1_bound })
}

/// `tr[V ρ]` with the swap `V = Σ |i⟩⟨j| ⊗ |j⟩⟨i|`.
pub fn swap_witness(rho: &DensityMatrix) -> Result<f64> {
    let dims = rho.dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return invalid(format!("swap needs two equal subsystems, got {dims:?}"));
    }
    let d = dims[0];
    let m = rho.entries();
    let mut acc = cr(0.0);
    for i in 0..d {
        for j in 0..d {
            // ⟨ij|V ρ|ij⟩ summed: V|ji⟩ = |ij⟩
            acc += m[(j * d + i, i * d + j)];
        }
    }
    Ok(acc.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Entangled,
    Inconclusive,
    NotDetected,
}

pub fn verdict(value: f64) -> Verdict {
    if value < -INCONCLUSIVE_BAND {
        Verdict::Entangled
    } else if value <= INCONCLUSIVE_BAND {
        Verdict::Inconclusive
    } else {
        Verdict::NotDetected
    }
}

/// Determinant sampled on a grid, row-major over `(x, y)`.
#[derive(Debug, Clone)]
pub struct WitnessRegion {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
    pub verdicts: Vec<Verdict>,
    /// `(x, y)` points where the determinant crosses zero along `y`.
    pub boundary: Vec<(f64, f64)>,
}

impl WitnessRegion {
    pub fn at(&self, i: usize, j: usize) -> Verdict {
        self.verdicts[i * self.ys.len() + j]
    }

    pub fn is_empty(&self) -> bool {
        !self.verdicts.contains(&Verdict::Entangled)
    }
}

/// Sample `f(x, y)` and locate sign changes along each `y` line by bisection.
pub fn witness_region(f: impl Fn(f64, f64) -> f64 + Sync, xs: &[f64], ys: &[f64]) -> WitnessRegion {
    use rayon::prelude::*;
    let values: Vec<f64> = xs
        .par_iter()
        .flat_map_iter(|&x| ys.iter().map(move |&y| (x, y)).collect::<Vec<_>>())
        .map(|(x, y)| f(x, y))
        .collect();
    let verdicts = values.iter().map(|&v| verdict(v)).collect();
    let mut boundary = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        for j in 1..ys.len() {
            let (v0, v1) = (values[i * ys.len() + j - 1], values[i * ys.len() + j]);
            if (v0 < 0.0) != (v1 < 0.0) {
                let (mut lo, mut hi) = (ys[j - 1], ys[j]);
                let neg_lo = v0 < 0.0;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if (f(x, mid) < 0.0) == neg_lo {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                boundary.push((x, 0.5 * (lo + hi)));
            }
        }
    }
    WitnessRegion {
        xs: xs.to_vec(),
        ys: ys.to_vec(),
        values,
        verdicts,
        boundary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn he_state(alpha: Complex64, phi: f64) -> HybridState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        HybridState::bipartite(
            2,
            vec![(
                1.0,
                vec![
                    (cr(s), 0, SymbolicKet::Coherent(alpha)),
                    ((c(0.0, phi)).exp() * s, 1, SymbolicKet::Coherent(-alpha)),
                ],
            )],
        )
        .unwrap()
    }

    #[test]
    fn ordering_matches_standard_layout() {
        let idx = ordered_indices(1);
        assert_eq!(
            idx,
            vec![[0, 0, 0, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
        );
        assert_eq!(ordered_indices(4).len(), 70);
        assert!(sv_submatrix(&|_: Word, _: Word| cr(0.0), &[[0, 0, 0, 1], [0, 0, 0, 0]]).is_err());
    }

    #[test]
    fn qudit_operators() {
        for d in 2..6 {
            let (a, ad) = qudit_mode_operators(d).unwrap();
            let mut p = CMatrix::identity(d, d);
            for _ in 0..d {
                p = &p * &a;
            }
            assert_eq!(p, CMatrix::zeros(d, d));
            let comm = &a * &ad - &ad * &a;
            for k in 0..d {
                let want = if k + 1 == d { -((d - 1) as f64) } else { 1.0 };
                assert!((comm[(k, k)].re - want).abs() < 1e-14);
            }
        }
        assert!(qudit_mode_operators(1).is_err());
    }

    #[test]
    fn he_state_determinants() {
        for alpha in [0.3, 1.0, 1.7] {
            let st = he_state(cr(alpha), 0.9);
            let (s1, s2) = qubit_qumode_determinants(cr(alpha));
            for ops in [QuditOps::Adapted, QuditOps::Embedded] {
                let p = HybridMoments::qudit_qumode(&st).unwrap().with_qudit_ops(ops);
                assert!((determinant(&p, &S1_ROWS).unwrap() - s1).abs() < 1e-12);
                assert!((determinant(&p, &S2_ROWS).unwrap() - s2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cat_closed_forms_match_moments() {
        for phi in [0.0, 1.0, 2.5, std::f64::consts::PI] {
            let alpha = cr(0.8);
            let st = HybridState::normalized_pure(
                vec![Slot::Qumode, Slot::Qumode],
                vec![
                    crate::compression::Branch::new(cr(1.0), vec![Factor::Ket(SymbolicKet::Coherent(alpha)); 2]),
                    crate::compression::Branch::new(
                        c(0.0, phi).exp(),
                        vec![Factor::Ket(SymbolicKet::Coherent(-alpha)); 2],
                    ),
                ],
            )
            .unwrap();
            let p = HybridMoments::new(&st, 0, 1).unwrap();
            let d = cat_witness_determinants(alpha, phi);
            assert!((determinant(&p, &S1_ROWS).unwrap() - d.s1).abs() < 1e-10, "s1 at {phi}");
            assert!((determinant(&p, &S2_ROWS).unwrap() - d.s2).abs() < 1e-10, "s2 at {phi}");
        }
    }

    #[test]
    fn squeezed_closed_form_matches_moments() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (alpha, r, theta) in [(0.7, 0.3, 0.0), (1.0, 0.5, 1.2)] {
            let sq = |a: f64| SymbolicKet::squeezed_coherent(cr(a), r, theta);
            let st =
                HybridState::bipartite(2, vec![(1.0, vec![(cr(s), 0, sq(alpha)), (cr(s), 1, sq(-alpha))])]).unwrap();
            let p = HybridMoments::qudit_qumode(&st).unwrap();
            let got = determinant(&p, &S1_ROWS).unwrap();
            let want = squeezed_s1(cr(alpha), r);
            assert!((got - want).abs() < 1e-7, "{got} vs {want}");
        }
    }

    #[test]
    fn density_path_matches_hybrid_path() {
        let st = he_state(cr(0.9), 0.0);
        let rho = st.fock_density(&st.default_cutoffs()).unwrap();
        let (s1, _) = qubit_qumode_determinants(cr(0.9));
        for ops in [QuditOps::Adapted, QuditOps::Embedded] {
            let p = DensityMoments::new(&rho, 1).unwrap().with_qudit_ops(0, ops);
            assert!((determinant(&p, &S1_ROWS).unwrap() - s1).abs() < 1e-10);
        }
    }

    #[test]
    fn thermal_closed_form_matches_moments() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let st = HybridState::bipartite(
            2,
            vec![(
                1.0,
                vec![
                    (cr(s), 0, SymbolicKet::coherent(cr(1.0))),
                    (cr(s), 1, SymbolicKet::coherent(cr(-1.0))),
                ],
            )],
        )
        .unwrap();
        let params = crate::channels::ThermalChannelParams::new(2.0 / 3.0, 1.0).unwrap();
        let out = ThermalOutput::new(st, params).unwrap();
        let got = determinant(&ThermalMoments::new(&out), &S1_ROWS).unwrap();
        assert!((got - thermal_s1(1.0, 2.0 / 3.0, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn thermal_threshold_and_optimum() {
        let a = optimal_alpha();
        assert!((a - 0.44).abs() < 0.005);
        for eta in [0.3, 0.6, 0.9] {
            assert!((optimal_alpha_for(eta) - a).abs() < 1e-9);
            let t = thermal_threshold(0.7, eta);
            assert!(thermal_s1(0.7, eta, t).abs() < 1e-12);
        }
        assert!(thermal_threshold(1.0, 1.0).is_infinite());
    }

    #[test]
    fn geometric_bounds_bracket() {
        let g = geometric_mixture_s1(0.1, 0.3).unwrap();
        assert!(g.s1_bound < 0.0);
        assert!(g.s1_lower <= g.s1 && g.s1 <= g.s1_bound);
        assert!(geometric_mixture_s1(1.0, 0.3).is_err());
        let z = geometric_mixture_s1(0.4, 0.0).unwrap();
        assert_eq!(z.s1_bound, 0.0);
    }

    #[test]
    fn swap_values() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = crate::linalg::CVector::from_vec(vec![cr(0.0), cr(s), cr(-s), cr(0.0)]);
        let rho = DensityMatrix::from_pure(&singlet, vec![2, 2]).unwrap();
        assert!((swap_witness(&rho).unwrap() + 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::new(CMatrix::identity(9, 9) / cr(9.0), vec![3, 3]).unwrap();
        assert!((swap_witness(&mixed).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn regions() {
        let xs = [0.5];
        let ys: Vec<f64> = (1..40).map(|k| k as f64 * 0.05).collect();
        let reg = witness_region(mixed24_s1, &xs, &ys);
        assert_eq!(reg.boundary.len(), 1);
        let (_, a) = reg.boundary[0];
        assert!(mixed24_s1(0.5, a).abs() < 1e-12);
        let empty = witness_region(|_, _| 1.0, &xs, &ys);
        assert!(empty.is_empty());
    }
}
