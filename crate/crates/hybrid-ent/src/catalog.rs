//! Named states and their generation procedures.
//!
//! Every constructor returns a [`NamedState`] with a stable family id that
//! the command-line tool and state-spec files refer to.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::channels::{amplitude_damp, ThermalChannelParams, ThermalOutput};
use crate::composite::DensityMatrix;
use crate::compression::{compress, Branch, Classification, Classify, Factor, Family, HybridState, Slot, Term};
use crate::error::{invalid, Error, Result};
use crate::kets::SymbolicKet;
use crate::linalg::{c, cr, CVector};

/// State contents: exact hybrid description, a density matrix, a pure
/// vector, or one of the two truly hybrid families.
#[derive(Debug, Clone)]
pub enum Payload {
    Hybrid(HybridState),
    Density(DensityMatrix),
    Pure { vector: CVector, dims: Vec<usize> },
    Thermal(ThermalOutput),
    Geometric(GeometricMixture),
}

#[derive(Debug, Clone)]
pub struct NamedState {
    pub id: &'static str,
    pub params: Vec<(&'static str, f64)>,
    pub payload: Payload,
}

impl NamedState {
    fn new(id: &'static str, params: Vec<(&'static str, f64)>, payload: Payload) -> Self {
        NamedState { id, params, payload }
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    pub fn hybrid(&self) -> Option<&HybridState> {
        match &self.payload {
            Payload::Hybrid(h) => Some(h),
            _ => None,
        }
    }

    /// Finite-dimensional density matrix: compressed for hybrid payloads.
    /// Truly hybrid families have none and report `Inapplicable`.
    pub fn density(&self) -> Result<DensityMatrix> {
        match &self.payload {
            Payload::Hybrid(h) => match h.family() {
                Family::Finite => compress(h),
                Family::Infinite(name) => Err(Error::Inapplicable(format!("{name} has no finite compression"))),
            },
            Payload::Density(r) => Ok(r.clone()),
            Payload::Pure { vector, dims } => DensityMatrix::from_pure(vector, dims.clone()),
            Payload::Thermal(_) | Payload::Geometric(_) => Err(Error::Inapplicable(format!(
                "{} is truly hybrid and has no finite compression",
                self.id
            ))),
        }
    }
}

impl Classify for NamedState {
    fn classification(&self) -> Classification {
        match &self.payload {
            Payload::Hybrid(h) => h.classification(),
            Payload::Density(_) => Classification::MixedDVLike(1),
            Payload::Pure { .. } => Classification::PureDVLike,
            Payload::Thermal(t) => t.classification(),
            Payload::Geometric(_) => Classification::TrulyHybrid,
        }
    }
}

fn coh(a: Complex64) -> SymbolicKet {
    SymbolicKet::Coherent(a)
}

fn check_unit(x: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return invalid(format!("{name} = {x} outside [0, 1]"));
    }
    Ok(())
}

/// `(|α, α⟩ + e^{iφ}|−α, −α⟩)/√N` with `N = 2 + 2e^{−4|α|²} cos φ`.
pub fn two_mode_cat(alpha: impl Into<Complex64>, phi: f64) -> Result<NamedState> {
    let alpha = alpha.into();
    let st = HybridState::normalized_pure(
        vec![Slot::Qumode, Slot::Qumode],
        vec![
            Branch::new(cr(1.0), vec![Factor::Ket(coh(alpha)); 2]),
            Branch::new(c(0.0, phi).exp(), vec![Factor::Ket(coh(-alpha)); 2]),
        ],
    )?;
    Ok(NamedState::new(
        "two_mode_cat",
        vec![("alpha", alpha.re), ("alpha_im", alpha.im), ("phi", phi)],
        Payload::Hybrid(st),
    ))
}

/// `√c|0⟩|ψ₀⟩ + e^{iφ}√(1−c)|1⟩|ψ₁⟩`.
pub fn qubit_qumode(cw: f64, phi: f64, ket0: SymbolicKet, ket1: SymbolicKet) -> Result<NamedState> {
    check_unit(cw, "c")?;
    let mut branches = Vec::new();
    if cw > 0.0 {
        branches.push((cr(cw.sqrt()), 0, ket0));
    }
    if cw < 1.0 {
        branches.push((c(0.0, phi).exp() * (1.0 - cw).sqrt(), 1, ket1));
    }
    let st = HybridState::bipartite(2, vec![(1.0, branches)])?;
    Ok(NamedState::new(
        "qubit_qumode",
        vec![("c", cw), ("phi", phi)],
        Payload::Hybrid(st),
    ))
}

/// `(|0⟩|α⟩ + e^{iφ}|1⟩|−α⟩)/√2`.
pub fn he_state(alpha: impl Into<Complex64>, phi: f64) -> Result<NamedState> {
    let alpha = alpha.into();
    let mut s = qubit_qumode(0.5, phi, coh(alpha), coh(-alpha))?;
    s.id = "he_state";
    s.params = vec![("alpha", alpha.re), ("alpha_im", alpha.im), ("phi", phi)];
    Ok(s)
}

/// The same state with the qumode squeezed by `r e^{iθ}`.
pub fn squeezed_he(alpha: f64, r: f64, theta: f64, phi: f64) -> Result<NamedState> {
    let k = |a: f64| SymbolicKet::squeezed_coherent(cr(a), r, theta);
    let mut s = qubit_qumode(0.5, phi, k(alpha), k(-alpha))?;
    s.id = "squeezed_he";
    s.params = vec![("alpha", alpha), ("r", r), ("theta", theta), ("phi", phi)];
    Ok(s)
}

/// `(|0⟩|0⟩ + |1⟩|α⟩ + |2⟩|−α⟩)/√3`.
pub fn qutrit_qumode(alpha: f64) -> Result<NamedState> {
    let s = cr(1.0 / 3f64.sqrt());
    let st = HybridState::bipartite(
        3,
        vec![(
            1.0,
            vec![(s, 0, coh(cr(0.0))), (s, 1, coh(cr(alpha))), (s, 2, coh(cr(-alpha)))],
        )],
    )?;
    Ok(NamedState::new(
        "qutrit_qumode",
        vec![("alpha", alpha)],
        Payload::Hybrid(st),
    ))
}

fn two_term_mixture(
    p: f64,
    first: Vec<(Complex64, usize, SymbolicKet)>,
    second: Vec<(Complex64, usize, SymbolicKet)>,
) -> Result<HybridState> {
    check_unit(p, "p")?;
    let mut terms = Vec::new();
    if p > 0.0 {
        terms.push((p, first));
    }
    if p < 1.0 {
        terms.push((1.0 - p, second));
    }
    HybridState::bipartite(2, terms)
}

/// `p|φ₊⟩⟨φ₊| + (1−p)|φ₋⟩⟨φ₋|` with `|φ±⟩ = (|0⟩|0⟩ + |1⟩|±α⟩)/√2`.
pub fn mixed23(p: f64, alpha: f64) -> Result<NamedState> {
    let s = cr(FRAC_1_SQRT_2);
    let vac = coh(cr(0.0));
    let st = two_term_mixture(
        p,
        vec![(s, 0, vac), (s, 1, coh(cr(alpha)))],
        vec![(s, 0, vac), (s, 1, coh(cr(-alpha)))],
    )?;
    Ok(NamedState::new(
        "mixed23",
        vec![("p", p), ("alpha", alpha)],
        Payload::Hybrid(st),
    ))
}

/// Mixture of `(|0⟩|α⟩ + |1⟩|−α⟩)/√2` and `(|0⟩|iα⟩ + |1⟩|−iα⟩)/√2`.
pub fn mixed24(p: f64, alpha: f64) -> Result<NamedState> {
    let s = cr(FRAC_1_SQRT_2);
    let st = two_term_mixture(
        p,
        vec![(s, 0, coh(cr(alpha))), (s, 1, coh(cr(-alpha)))],
        vec![(s, 0, coh(c(0.0, alpha))), (s, 1, coh(c(0.0, -alpha)))],
    )?;
    Ok(NamedState::new(
        "mixed24",
        vec![("p", p), ("alpha", alpha)],
        Payload::Hybrid(st),
    ))
}

/// `(|0⟩|α⟩ + |1⟩|−α⟩)/√2` after photon loss with transmissivity `eta`.
pub fn damped(alpha: f64, eta: f64) -> Result<NamedState> {
    let input = he_state(alpha, 0.0)?;
    let out = amplitude_damp(input.hybrid().expect("hybrid payload"), eta)?;
    Ok(NamedState::new(
        "damped",
        vec![("alpha", alpha), ("eta", eta)],
        Payload::Hybrid(out),
    ))
}

/// `(|0⟩|α⟩ + |1⟩|−α⟩)/√2` after the thermal channel.
pub fn thermal(alpha: f64, eta: f64, n_th: f64) -> Result<NamedState> {
    let input = he_state(alpha, 0.0)?;
    let params = ThermalChannelParams::new(eta, n_th)?;
    let out = ThermalOutput::new(input.hybrid().expect("hybrid payload").clone(), params)?;
    Ok(NamedState::new(
        "thermal",
        vec![("alpha", alpha), ("eta", eta), ("n_th", n_th)],
        Payload::Thermal(out),
    ))
}

/// `Σ_{n≥1} p_n |ψ_n⟩⟨ψ_n|` with `p_n = ((1−x)/x) xⁿ` and
/// `|ψ_n⟩ = (|0⟩|√n α⟩ + e^{iφ}|1⟩|−√n α⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricMixture {
    pub x: f64,
    pub alpha: f64,
    pub phi: f64,
}

/// Finite cut of a [`GeometricMixture`], renormalized.
#[derive(Debug, Clone)]
pub struct TruncatedMixture {
    pub state: HybridState,
    pub kept_terms: usize,
    pub neglected_weight: f64,
}

impl GeometricMixture {
    pub fn weight(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        (1.0 - self.x) / self.x * self.x.powi(n as i32)
    }

    /// Branches `(coefficient, level, ket)` of the `n`-th pure term.
    pub fn branches(&self, n: usize) -> Vec<(Complex64, usize, SymbolicKet)> {
        let a = (n as f64).sqrt() * self.alpha;
        vec![
            (cr(FRAC_1_SQRT_2), 0, coh(cr(a))),
            (c(0.0, self.phi).exp() * FRAC_1_SQRT_2, 1, coh(cr(-a))),
        ]
    }

    /// Lazy `(n, p_n, branches)` for `n = 1, 2, …`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, f64, Vec<(Complex64, usize, SymbolicKet)>)> + '_ {
        (1..).map(move |n| (n, self.weight(n), self.branches(n)))
    }

    /// Keeps `n ≤ n_max` and renormalizes; the dropped weight is `x^{n_max}`.
    pub fn truncate(&self, n_max: usize) -> Result<TruncatedMixture> {
        if n_max == 0 {
            return invalid("truncation needs at least one term");
        }
        let neglected = self.x.powi(n_max as i32);
        let kept = 1.0 - neglected;
        let terms = self.terms().take(n_max).map(|(_, p, b)| (p / kept, b)).collect();
        let state = HybridState::bipartite(2, terms)?;
        Ok(TruncatedMixture {
            state,
            kept_terms: n_max,
            neglected_weight: neglected,
        })
    }
}

pub fn geometric_mixture(x: f64, alpha: f64, phi: f64) -> Result<NamedState> {
    if !(x > 0.0 && x < 1.0) {
        return invalid(format!("mixing parameter {x} outside (0, 1)"));
    }
    Ok(NamedState::new(
        "geometric_mixture",
        vec![("x", x), ("alpha", alpha), ("phi", phi)],
        Payload::Geometric(GeometricMixture { x, alpha, phi }),
    ))
}

fn three_qubit(amps: [(usize, Complex64); 8]) -> CVector {
    let mut v = CVector::zeros(8);
    for (i, a) in amps {
        v[i] += a;
    }
    v
}

fn pure3(id: &'static str, params: Vec<(&'static str, f64)>, v: CVector) -> NamedState {
    NamedState::new(
        id,
        params,
        Payload::Pure {
            vector: v,
            dims: vec![2, 2, 2],
        },
    )
}

/// `(|000⟩ + |111⟩)/√2`.
pub fn ghz() -> NamedState {
    let s = cr(FRAC_1_SQRT_2);
    let z = cr(0.0);
    pure3(
        "ghz",
        vec![],
        three_qubit([(0, s), (7, s), (1, z), (2, z), (3, z), (4, z), (5, z), (6, z)]),
    )
}

/// `(|001⟩ + |010⟩ + |100⟩)/√3`.
pub fn w_state() -> NamedState {
    let s = cr(1.0 / 3f64.sqrt());
    let z = cr(0.0);
    pure3(
        "w_state",
        vec![],
        three_qubit([(1, s), (2, s), (4, s), (0, z), (3, z), (5, z), (6, z), (7, z)]),
    )
}

fn check_overlap(q: Complex64, name: &str) -> Result<()> {
    if !(q.norm() <= 1.0 + 1e-12) {
        return invalid(format!("overlap {name} has modulus {} > 1", q.norm()));
    }
    Ok(())
}

/// `(|0⟩|0⟩|ψ₀⟩ + |1⟩|1⟩|ψ₁⟩)/√2` in the compressed qubit basis, `Q = ⟨ψ₀|ψ₁⟩`.
pub fn tripartite_qqm(q: Complex64) -> Result<NamedState> {
    check_overlap(q, "Q")?;
    let s = FRAC_1_SQRT_2;
    let r = (1.0 - q.norm_sqr()).max(0.0).sqrt();
    let z = cr(0.0);
    let v = three_qubit([
        (0, cr(s)),
        (6, q * s),
        (7, cr(r * s)),
        (1, z),
        (2, z),
        (3, z),
        (4, z),
        (5, z),
    ]);
    Ok(pure3("tripartite_qqm", vec![("q", q.re), ("q_im", q.im)], v))
}

/// `(|0⟩|φ₀⟩|ψ₀⟩ + |1⟩|φ₁⟩|ψ₁⟩)/√2` in the compressed qubit basis.
pub fn tripartite_qmm(q_phi: Complex64, q_psi: Complex64) -> Result<NamedState> {
    check_overlap(q_phi, "Q_phi")?;
    check_overlap(q_psi, "Q_psi")?;
    let s = FRAC_1_SQRT_2;
    let rp = (1.0 - q_phi.norm_sqr()).max(0.0).sqrt();
    let rs = (1.0 - q_psi.norm_sqr()).max(0.0).sqrt();
    let z = cr(0.0);
    let v = three_qubit([
        (0, cr(s)),
        (4, q_phi * q_psi * s),
        (7, cr(rp * rs * s)),
        (6, q_psi * rp * s),
        (5, q_phi * rs * s),
        (1, z),
        (2, z),
        (3, z),
    ]);
    Ok(pure3(
        "tripartite_qmm",
        vec![
            ("q_phi", q_phi.re),
            ("q_phi_im", q_phi.im),
            ("q_psi", q_psi.re),
            ("q_psi_im", q_psi.im),
        ],
        v,
    ))
}

/// Dispersive qubit-mode coupling on `|α⟩ ⊗ (|0⟩ + |1⟩)/√2`:
/// `(|αe^{iφ}⟩|0⟩ + |αe^{−iφ}⟩|1⟩)/√2`, qumode first.
pub fn jcm_generate(alpha: f64, varphi: f64) -> Result<NamedState> {
    let s = cr(FRAC_1_SQRT_2);
    let rot = |sign: f64| Factor::Ket(coh(c(0.0, sign * varphi).exp() * alpha));
    let st = HybridState::new(
        vec![Slot::Qumode, Slot::Qudit(2)],
        vec![Term::new(
            1.0,
            vec![
                Branch::new(s, vec![rot(1.0), Factor::Level(0)]),
                Branch::new(s, vec![rot(-1.0), Factor::Level(1)]),
            ],
        )],
    )?;
    Ok(NamedState::new(
        "jcm",
        vec![("alpha", alpha), ("varphi", varphi)],
        Payload::Hybrid(st),
    ))
}

/// Projects the (single) qubit of a pure hybrid state onto `|±⟩`.
/// The outcome probability is recorded as the `probability` parameter.
pub fn project_to_cat(state: &NamedState, sign: f64) -> Result<NamedState> {
    let Some(h) = state.hybrid() else {
        return invalid("projection needs a hybrid payload");
    };
    if h.terms().len() != 1 {
        return invalid("projection needs a pure state");
    }
    let Some(qubit) = h.slots().iter().position(|s| *s == Slot::Qudit(2)) else {
        return invalid("state has no qubit slot");
    };
    let sign = if sign >= 0.0 { 1.0 } else { -1.0 };
    let slots: Vec<Slot> = h
        .slots()
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != qubit)
        .map(|(_, s)| *s)
        .collect();
    let branches: Vec<Branch> = h.terms()[0]
        .branches
        .iter()
        .map(|b| {
            let Factor::Level(l) = b.factors[qubit] else {
                unreachable!()
            };
            let amp = FRAC_1_SQRT_2 * if l == 1 { sign } else { 1.0 };
            let rest = b
                .factors
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != qubit)
                .map(|(_, f)| *f)
                .collect();
            Branch::new(b.coeff * amp, rest)
        })
        .collect();
    let prob = crate::compression::branch_norm_sqr(&branches);
    let out = HybridState::normalized_pure(slots, branches)?;
    let mut params = state.params.clone();
    params.push(("sign", sign));
    params.push(("probability", prob));
    Ok(NamedState::new("projected_cat", params, Payload::Hybrid(out)))
}

/// `(|0⟩|√n α⟩ + e^{iφ}|1⟩|−√n α⟩)/√2`, the result of `Ĝ` on
/// `(|0⟩ + e^{iφ}|1⟩)/√2 ⊗ |α⟩`.
pub fn g_interaction_state(n: usize, alpha: f64, phi: f64) -> Result<NamedState> {
    if n == 0 {
        return invalid("interaction order must be at least 1");
    }
    let a = (n as f64).sqrt() * alpha;
    let mut s = qubit_qumode(0.5, phi, coh(cr(a)), coh(cr(-a)))?;
    s.id = "g_interaction";
    s.params = vec![("n", n as f64), ("alpha", alpha), ("phi", phi)];
    Ok(s)
}

/// Applies `Ĝ = e^{|α|²(1−n)/2} (σ_z √n)^{a†a}` to the product input on a
/// Fock truncation; qubit-major layout of dimension `2 (n_cut + 1)`.
pub fn g_interaction_fock(n: usize, alpha: f64, phi: f64, n_cut: usize) -> Result<CVector> {
    if n == 0 {
        return invalid("interaction order must be at least 1");
    }
    let input = SymbolicKet::Coherent(cr(alpha)).fock_amplitudes(n_cut);
    let pref = (alpha * alpha * (1.0 - n as f64) / 2.0).exp();
    let g = (n as f64).sqrt();
    let dim = n_cut + 1;
    let mut out = CVector::zeros(2 * dim);
    let qubit = [cr(FRAC_1_SQRT_2), c(0.0, phi).exp() * FRAC_1_SQRT_2];
    for (l, q) in qubit.iter().enumerate() {
        let z = if l == 0 { g } else { -g };
        let mut zk = 1.0;
        for k in 0..dim {
            out[l * dim + k] = *q * input[k] * (pref * zk);
            zk *= z;
        }
    }
    Ok(out)
}

/// `F = ½[1 + e^{−(1−η)α²(1−cos θ)}]`.
pub fn qubus_fidelity(alpha: f64, theta: f64, eta: f64) -> f64 {
    0.5 * (1.0 + (-(1.0 - eta) * alpha * alpha * (1.0 - theta.cos())).exp())
}

/// `F|Ψ⁺⟩⟨Ψ⁺| + (1−F)|Ψ⁻⟩⟨Ψ⁻|` with the qubus first, then the two qubits.
pub fn qubus_state(alpha: f64, theta: f64, eta: f64) -> Result<NamedState> {
    check_unit(eta, "eta")?;
    let f = qubus_fidelity(alpha, theta, eta);
    let amp = eta.sqrt() * alpha;
    let ph = eta * alpha * alpha * theta.sin();
    let k0 = Factor::Ket(coh(cr(amp)));
    let kp = Factor::Ket(coh(c(0.0, theta).exp() * amp));
    let km = Factor::Ket(coh(c(0.0, -theta).exp() * amp));
    let psi = |sign: f64| {
        vec![
            Branch::new(cr(0.5), vec![k0, Factor::Level(0), Factor::Level(0)]),
            Branch::new(cr(0.5 * sign), vec![k0, Factor::Level(1), Factor::Level(1)]),
            Branch::new(
                c(0.0, -ph).exp() * (0.5 * sign),
                vec![kp, Factor::Level(1), Factor::Level(0)],
            ),
            Branch::new(c(0.0, ph).exp() * 0.5, vec![km, Factor::Level(0), Factor::Level(1)]),
        ]
    };
    let mut terms = vec![Term::new(f, psi(1.0))];
    if 1.0 - f > 0.0 {
        terms.push(Term::new(1.0 - f, psi(-1.0)));
    }
    let st = HybridState::new(vec![Slot::Qumode, Slot::Qudit(2), Slot::Qudit(2)], terms)?;
    Ok(NamedState::new(
        "qubus",
        vec![("alpha", alpha), ("theta", theta), ("eta", eta), ("fidelity", f)],
        Payload::Hybrid(st),
    ))
}

/// Family ids with their parameter names and defaults.
pub const FAMILIES: &[(&str, &[(&str, f64)])] = &[
    ("two_mode_cat", &[("alpha", 1.0), ("alpha_im", 0.0), ("phi", 0.0)]),
    (
        "qubit_qumode",
        &[("c", 0.5), ("phi", 0.0), ("alpha0", 1.0), ("alpha1", -1.0)],
    ),
    ("he_state", &[("alpha", 1.0), ("alpha_im", 0.0), ("phi", 0.0)]),
    (
        "squeezed_he",
        &[("alpha", 1.0), ("r", 0.0), ("theta", 0.0), ("phi", 0.0)],
    ),
    ("qutrit_qumode", &[("alpha", 1.0)]),
    ("mixed23", &[("p", 0.5), ("alpha", 1.0)]),
    ("mixed24", &[("p", 0.5), ("alpha", 1.0)]),
    ("damped", &[("alpha", 1.0), ("eta", 1.0)]),
    ("thermal", &[("alpha", 1.0), ("eta", 1.0), ("n_th", 0.0)]),
    ("geometric_mixture", &[("x", 0.5), ("alpha", 1.0), ("phi", 0.0)]),
    ("ghz", &[]),
    ("w_state", &[]),
    ("tripartite_qqm", &[("q", 0.0), ("q_im", 0.0)]),
    (
        "tripartite_qmm",
        &[("q_phi", 0.0), ("q_phi_im", 0.0), ("q_psi", 0.0), ("q_psi_im", 0.0)],
    ),
    ("jcm", &[("alpha", 1.0), ("varphi", 0.5)]),
    ("g_interaction", &[("n", 1.0), ("alpha", 1.0), ("phi", 0.0)]),
    ("qubus", &[("alpha", 1.0), ("theta", 0.1), ("eta", 1.0)]),
];

/// Builds a family by id; unknown ids or parameter names are rejected.
pub fn build(id: &str, params: &BTreeMap<String, f64>) -> Result<NamedState> {
    let Some((_, known)) = FAMILIES.iter().find(|(name, _)| *name == id) else {
        let ids: Vec<&str> = FAMILIES.iter().map(|(n, _)| *n).collect();
        return invalid(format!("unknown family '{id}'; known: {}", ids.join(", ")));
    };
    for k in params.keys() {
        if !known.iter().any(|(n, _)| n == k) {
            let names: Vec<&str> = known.iter().map(|(n, _)| *n).collect();
            return invalid(format!(
                "family '{id}' has no parameter '{k}'; known: {}",
                names.join(", ")
            ));
        }
    }
    for (k, v) in params {
        if !v.is_finite() {
            return invalid(format!("parameter '{k}' is not finite"));
        }
    }
    let g = |name: &str| -> f64 {
        params
            .get(name)
            .copied()
            .unwrap_or_else(|| known.iter().find(|(n, _)| *n == name).map(|(_, v)| *v).unwrap_or(0.0))
    };
    match id {
        "two_mode_cat" => two_mode_cat(c(g("alpha"), g("alpha_im")), g("phi")),
        "qubit_qumode" => qubit_qumode(g("c"), g("phi"), coh(cr(g("alpha0"))), coh(cr(g("alpha1")))),
        "he_state" => he_state(c(g("alpha"), g("alpha_im")), g("phi")),
        "squeezed_he" => squeezed_he(g("alpha"), g("r"), g("theta"), g("phi")),
        "qutrit_qumode" => qutrit_qumode(g("alpha")),
        "mixed23" => mixed23(g("p"), g("alpha")),
        "mixed24" => mixed24(g("p"), g("alpha")),
        "damped" => damped(g("alpha"), g("eta")),
        "thermal" => thermal(g("alpha"), g("eta"), g("n_th")),
        "geometric_mixture" => geometric_mixture(g("x"), g("alpha"), g("phi")),
        "ghz" => Ok(ghz()),
        "w_state" => Ok(w_state()),
        "tripartite_qqm" => tripartite_qqm(c(g("q"), g("q_im"))),
        "tripartite_qmm" => tripartite_qmm(c(g("q_phi"), g("q_phi_im")), c(g("q_psi"), g("q_psi_im"))),
        "jcm" => jcm_generate(g("alpha"), g("varphi")),
        "g_interaction" => {
            let n = g("n");
            if n < 1.0 || n.fract() != 0.0 {
                return invalid(format!("interaction order {n} is not a positive integer"));
            }
            g_interaction_state(n as usize, g("alpha"), g("phi"))
        }
        "qubus" => qubus_state(g("alpha"), g("theta"), g("eta")),
        _ => unreachable!("family table and dispatch disagree"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{ckw, concurrence, entropy_of_entanglement, schmidt};

    #[test]
    fn cat_concurrence_and_degeneracy() {
        for (a, phi) in [(0.5, 0.0), (1.0, 2.0), (0.7, std::f64::consts::PI)] {
            let rho = two_mode_cat(a, phi).unwrap().density().unwrap();
            let e = (-4.0 * a * a).exp();
            let want = (1.0 - e) / (1.0 + e * phi.cos());
            assert!((concurrence(&rho).unwrap() - want).abs() < 1e-10);
        }
        assert!(matches!(
            two_mode_cat(1e-9, std::f64::consts::PI),
            Err(Error::DegenerateNormalization(_))
        ));
    }

    #[test]
    fn damped_concurrence_matches_dephasing_form() {
        use crate::channels::{damped_concurrence, damped_concurrence_published};
        for eta in [0.0, 0.2, 0.5, 0.9, 1.0] {
            for a in [0.3, 0.8, 1.5] {
                let c = concurrence(&damped(a, eta).unwrap().density().unwrap()).unwrap();
                assert!((c - damped_concurrence(a, eta)).abs() < 1e-9, "eta {eta} alpha {a}");
            }
        }
        let a: f64 = 1.2;
        assert!((damped_concurrence_published(a, 1.0) - (1.0 - (-4.0 * a * a).exp()).sqrt()).abs() < 1e-12);
        assert!((damped_concurrence_published(a, 0.5) - damped_concurrence(a, 0.5)).abs() > 0.1);
    }

    #[test]
    fn qutrit_expansion_and_schmidt() {
        let alpha = (2.0 * 2f64.ln()).sqrt();
        let st = qutrit_qumode(alpha).unwrap();
        let comp = crate::compression::compression(st.hybrid().unwrap()).unwrap();
        let x: f64 = 0.5;
        let r = 3f64.sqrt().recip();
        let v = &comp.components[0].1;
        let want = [
            (0, 1.0),
            (3, x),
            (4, (1.0 - x * x).sqrt()),
            (6, x),
            (7, -x * x * (1.0 - x * x).sqrt()),
            (8, (1.0 - x * x - x.powi(4) + x.powi(6)).sqrt()),
        ];
        for (i, w) in want {
            assert!((v[i] - cr(w * r)).norm() < 1e-10, "index {i}");
        }
        let sd = schmidt(v, (3, 3)).unwrap();
        for (got, want) in sd.coefficients.iter().zip([0.76, 0.56, 0.33]) {
            assert!((got - want).abs() < 0.005, "{got} vs {want}");
        }
    }

    #[test]
    fn qubit_qumode_edges() {
        let k = |a: f64| coh(cr(a));
        for cw in [0.0, 1.0] {
            let s = qubit_qumode(cw, 0.3, k(1.0), k(-1.0)).unwrap();
            let v = &crate::compression::compression(s.hybrid().unwrap()).unwrap().components[0].1;
            let d = crate::compression::compression(s.hybrid().unwrap()).unwrap();
            let dims = d.dims().to_vec();
            assert!(entropy_of_entanglement(v, (dims[0], dims[1])).unwrap().abs() < 1e-12);
        }
        assert!(qubit_qumode(1.2, 0.0, k(1.0), k(-1.0)).is_err());
    }

    #[test]
    fn mixtures() {
        let m24 = mixed24(0.3, 1.0).unwrap();
        assert_eq!(m24.hybrid().unwrap().kets_in_slot(1).len(), 4);
        assert_eq!(m24.density().unwrap().dims(), &[2, 4]);
        assert_eq!(mixed23(0.5, 1.0).unwrap().density().unwrap().dims(), &[2, 3]);
        let g = geometric_mixture(0.4, 0.5, 0.0).unwrap();
        let Payload::Geometric(gm) = &g.payload else { panic!() };
        let total: f64 = gm.terms().take(200).map(|(_, p, _)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let t = gm.truncate(10).unwrap();
        assert!((t.neglected_weight - 0.4f64.powi(10)).abs() < 1e-15);
        assert!(g.density().is_err());
        assert_eq!(crate::compression::classify(&g), Classification::TrulyHybrid);
        assert!(geometric_mixture(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn tripartite_states() {
        let r = ckw(&ghz().density().unwrap()).unwrap();
        assert!((r.tau_res - 1.0).abs() < 1e-12);
        let w = ckw(&w_state().density().unwrap()).unwrap();
        assert!(w.tau_res.abs() < 1e-12);
        let one = tripartite_qqm(cr(1.0)).unwrap().density().unwrap();
        assert!((ckw(&one).unwrap().c2_ab - 1.0).abs() < 1e-12);
        let g0 = tripartite_qmm(cr(0.0), cr(0.0)).unwrap();
        let Payload::Pure { vector, .. } = &g0.payload else {
            panic!()
        };
        let Payload::Pure { vector: gv, .. } = &ghz().payload else {
            panic!()
        };
        assert!((vector - gv).norm() < 1e-15);
    }

    #[test]
    fn printed_tripartite_expansions_match_compression() {
        let alpha = 0.6;
        let s = cr(FRAC_1_SQRT_2);
        let kp = Factor::Ket(coh(cr(alpha)));
        let km = Factor::Ket(coh(cr(-alpha)));
        let h = HybridState::new(
            vec![Slot::Qudit(2), Slot::Qudit(2), Slot::Qumode],
            vec![Term::new(
                1.0,
                vec![
                    Branch::new(s, vec![Factor::Level(0), Factor::Level(0), kp]),
                    Branch::new(s, vec![Factor::Level(1), Factor::Level(1), km]),
                ],
            )],
        )
        .unwrap();
        let q = crate::kets::braket(&coh(cr(alpha)), &coh(cr(-alpha)));
        let comp = crate::compression::compression(&h).unwrap();
        let Payload::Pure { vector, .. } = tripartite_qqm(q).unwrap().payload else {
            panic!()
        };
        assert!((&comp.components[0].1 - vector).norm() < 1e-10);

        let b = 0.9;
        let kb = |x: f64| Factor::Ket(coh(cr(x)));
        let h2 = HybridState::new(
            vec![Slot::Qudit(2), Slot::Qumode, Slot::Qumode],
            vec![Term::new(
                1.0,
                vec![
                    Branch::new(s, vec![Factor::Level(0), kb(b), kp]),
                    Branch::new(s, vec![Factor::Level(1), kb(-b), km]),
                ],
            )],
        )
        .unwrap();
        let qphi = crate::kets::braket(&coh(cr(b)), &coh(cr(-b)));
        let comp2 = crate::compression::compression(&h2).unwrap();
        let Payload::Pure { vector: v2, .. } = tripartite_qmm(qphi, q).unwrap().payload else {
            panic!()
        };
        assert!((&comp2.components[0].1 - v2).norm() < 1e-10);
    }

    #[test]
    fn jcm_and_projection() {
        let st = jcm_generate(1.0, 0.0).unwrap();
        assert_eq!(st.density().unwrap().dims(), &[1, 2]);
        let st = jcm_generate(1.2, 0.4).unwrap();
        let plus = project_to_cat(&st, 1.0).unwrap();
        let minus = project_to_cat(&st, -1.0).unwrap();
        let (pp, pm) = (plus.param("probability").unwrap(), minus.param("probability").unwrap());
        assert!((pp + pm - 1.0).abs() < 1e-12);
        let ov = crate::kets::braket(&coh(c(0.0, 0.4).exp() * 1.2), &coh(c(0.0, -0.4).exp() * 1.2));
        assert!((pp - 0.5 * (1.0 + ov.re)).abs() < 1e-12);
    }

    #[test]
    fn g_interaction_matches_target() {
        for n in 1..=4 {
            for alpha in [0.4, 1.0] {
                let n_cut = 60;
                let got = g_interaction_fock(n, alpha, 0.7, n_cut).unwrap();
                let st = g_interaction_state(n, alpha, 0.7).unwrap();
                let rho = st.hybrid().unwrap().fock_density(&[n_cut]).unwrap();
                let want = crate::measures::dominant_vector(&rho);
                let phase = want.dotc(&got);
                assert!((phase.norm() - 1.0).abs() < 1e-7, "n={n} alpha={alpha}");
                assert!((got.norm() - 1.0).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn qubus() {
        assert_eq!(qubus_fidelity(1.0, 0.3, 1.0), 1.0);
        let f = qubus_fidelity(1.0, 0.1, 0.9);
        assert!((f - 0.5 * (1.0 + (-0.1 * (1.0 - 0.1f64.cos())).exp())).abs() < 1e-15);
        let st = qubus_state(1.0, 0.0, 0.8).unwrap();
        assert_eq!(st.density().unwrap().dims(), &[1, 2, 2]);
        let st = qubus_state(1.5, 0.5, 0.7).unwrap();
        assert!((st.density().unwrap().trace() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn build_rejects_unknown() {
        let mut p = BTreeMap::new();
        p.insert("alpha".to_string(), 0.5);
        assert!(build("qutrit_qumode", &p).is_ok());
        p.insert("beta".to_string(), 0.5);
        assert!(build("qutrit_qumode", &p).is_err());
        assert!(build("nope", &BTreeMap::new()).is_err());
        for (id, _) in FAMILIES {
            assert!(build(id, &BTreeMap::new()).is_ok(), "{id}");
        }
    }
}
