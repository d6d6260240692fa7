//! Decoherence channels: photon loss, thermal noise, qubit loss, and
//! channel-state duality.

use num_complex::Complex64;

use crate::composite::DensityMatrix;
use crate::compression::{Branch, Factor, HybridState, Term};
use crate::error::{invalid, Error, Result};
use crate::fock::Operator;
use crate::kets::SymbolicKet;
use crate::linalg::{binomial, cpowi, cr, factorial, herm_eigen, herm_eigenvalues, join_index, split_index};
use crate::linalg::{CMatrix, CVector};
use crate::measures::{concurrence, negativity};

/// Default budget on `‖Σ K†K − 1‖`.
pub const COMPLETENESS_BUDGET: f64 = 1e-8;
/// Neglected thermal population allowed when sizing the environment.
pub const THERMAL_TAIL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalChannelParams {
    pub eta: f64,
    pub n_th: f64,
}

impl ThermalChannelParams {
    pub fn new(eta: f64, n_th: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return invalid(format!("transmissivity {eta} outside [0, 1]"));
        }
        if !(n_th >= 0.0) || !n_th.is_finite() {
            return invalid(format!("thermal photon number {n_th} must be finite and nonnegative"));
        }
        Ok(ThermalChannelParams { eta, n_th })
    }

    /// Environment population `n̄ⁿ/(1+n̄)^{n+1}`.
    pub fn population(&self, n: usize) -> f64 {
        let x = self.n_th / (1.0 + self.n_th);
        x.powi(n as i32) / (1.0 + self.n_th)
    }
}

/// Kraus operators with their recorded completeness defect.
/// Operators may be rectangular: `output_dim × input_dim`.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub operators: Vec<Operator>,
    pub completeness_residual: f64,
    pub input_dim: usize,
    pub output_dim: usize,
}

impl KrausSet {
    pub fn new(operators: Vec<Operator>) -> Result<Self> {
        let Some(first) = operators.first() else {
            return invalid("empty Kraus set");
        };
        let (output_dim, input_dim) = first.dims();
        if operators.iter().any(|k| k.dims() != (output_dim, input_dim)) {
            return invalid("Kraus operators have mismatched shapes");
        }
        let mut sum = CMatrix::zeros(input_dim, input_dim);
        for k in &operators {
            sum += k.entries.adjoint() * &k.entries;
        }
        sum -= CMatrix::identity(input_dim, input_dim);
        let completeness_residual = herm_eigenvalues(&sum).into_iter().fold(0.0f64, |m, l| m.max(l.abs()));
        Ok(KrausSet {
            operators,
            completeness_residual,
            input_dim,
            output_dim,
        })
    }

    pub fn identity(d: usize) -> Self {
        KrausSet::new(vec![Operator::identity(d)]).expect("identity is a valid Kraus set")
    }

    pub fn within_budget(&self, budget: f64) -> bool {
        self.completeness_residual <= budget
    }
}

/// `K₀ = |0⟩⟨0| + √η|1⟩⟨1|`, `K₁ = √(1−η)|0⟩⟨1|`.
pub fn qubit_loss_kraus(eta: f64) -> Result<KrausSet> {
    if !(0.0..=1.0).contains(&eta) {
        return invalid(format!("transmissivity {eta} outside [0, 1]"));
    }
    let k0 = CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(eta.sqrt())]);
    let k1 = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr((1.0 - eta).sqrt()), cr(0.0), cr(0.0)]);
    KrausSet::new(vec![Operator::new(k0), Operator::new(k1)])
}

/// Photon-loss operators `A_m = Σ_k √C(k,m) √η^{k−m} √(1−η)^m |k−m⟩⟨k|`.
pub fn amplitude_damping_kraus(eta: f64, n_cut: usize) -> Result<KrausSet> {
    ThermalChannelParams::new(eta, 0.0)?;
    let dim = n_cut + 1;
    let (s, t) = (eta.sqrt(), (1.0 - eta).sqrt());
    let ops = (0..dim)
        .map(|m| {
            let mut a = CMatrix::zeros(dim, dim);
            for k in m..dim {
                a[(k - m, k)] = cr(binomial(k, m).sqrt() * s.powi((k - m) as i32) * t.powi(m as i32));
            }
            Operator::new(a)
        })
        .collect();
    KrausSet::new(ops)
}

/// Smallest environment cutoff whose neglected thermal population is below
/// [`THERMAL_TAIL`].
pub fn thermal_env_cutoff(n_th: f64) -> usize {
    if n_th <= 0.0 {
        return 0;
    }
    let x = n_th / (1.0 + n_th);
    (THERMAL_TAIL.ln() / x.ln()).ceil().max(1.0) as usize - 1
}

fn kappa(m: usize, k: usize, n: usize, s: f64, t: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..=n.min(m) {
        if m - i > k {
            continue;
        }
        let sign = if (n - i).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc += binomial(n, i)
            * binomial(k, m - i)
            * s.powi(k as i32 - m as i32 + 2 * i as i32)
            * t.powi((n + m - 2 * i) as i32)
            * sign;
    }
    acc
}

/// Thermal-noise Kraus operators `√ρ_n K_mn` on inputs `|0⟩..|n_cut⟩`.
///
/// Each operator maps into `|0⟩..|n_cut + n_env_cut⟩`, which holds every
/// output photon number exactly, so the only truncation is the thermal
/// population beyond `n_env_cut`.
pub fn thermal_kraus(params: ThermalChannelParams, n_env_cut: usize, n_cut: usize) -> Result<KrausSet> {
    let tail = 1.0 - (0..=n_env_cut).map(|n| params.population(n)).sum::<f64>();
    if tail > THERMAL_TAIL {
        return Err(Error::CutoffTooSmall {
            given: n_env_cut,
            suggested: thermal_env_cutoff(params.n_th),
            tol: THERMAL_TAIL,
        });
    }
    let (s, t) = (params.eta.sqrt(), (1.0 - params.eta).sqrt());
    let in_dim = n_cut + 1;
    let out_dim = n_cut + n_env_cut + 1;
    let mut ops = Vec::new();
    for n in 0..=n_env_cut {
        let weight = params.population(n).sqrt();
        if weight == 0.0 {
            continue;
        }
        for m in 0..=(n_cut + n) {
            let mut a = CMatrix::zeros(out_dim, in_dim);
            let mut nonzero = false;
            for k in m.saturating_sub(n)..in_dim {
                let row = n + k - m;
                let pref = (factorial(m) * factorial(row) / (factorial(k) * factorial(n))).sqrt();
                let v = weight * pref * kappa(m, k, n, s, t);
                if v != 0.0 {
                    a[(row, k)] = cr(v);
                    nonzero = true;
                }
            }
            if nonzero {
                ops.push(Operator::new(a));
            }
        }
    }
    KrausSet::new(ops)
}

/// `Σ_K (1⊗K⊗1) ρ (1⊗K⊗1)†` on one subsystem. The input is factored as
/// `ρ = W W†` and each operator acts on the columns of `W`.
pub fn apply_kraus(rho: &DensityMatrix, ks: &KrausSet, subsystem: usize) -> Result<DensityMatrix> {
    let dims = rho.dims().to_vec();
    if subsystem >= dims.len() {
        return invalid(format!("subsystem {subsystem} out of range for dims {dims:?}"));
    }
    if dims[subsystem] != ks.input_dim {
        return invalid(format!(
            "channel acts on dimension {}, subsystem has {}",
            ks.input_dim, dims[subsystem]
        ));
    }
    let mut out_dims = dims.clone();
    out_dims[subsystem] = ks.output_dim;
    let out_total: usize = out_dims.iter().product();
    let (vals, vecs) = herm_eigen(rho.entries());
    let columns: Vec<CVector> = vals
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 1e-15)
        .map(|(k, &l)| vecs.column(k) * cr(l.sqrt()))
        .collect();
    let mut out = CMatrix::zeros(out_total, out_total);
    let in_total = rho.dim();
    let mut digits_in: Vec<Vec<usize>> = Vec::with_capacity(in_total);
    for idx in 0..in_total {
        digits_in.push(split_index(idx, &dims));
    }
    for k in &ks.operators {
        for w in &columns {
            let mut v = CVector::zeros(out_total);
            for (idx, d) in digits_in.iter().enumerate() {
                let amp = w[idx];
                if amp == cr(0.0) {
                    continue;
                }
                let mut od = d.clone();
                let col = d[subsystem];
                for row in 0..ks.output_dim {
                    let e = k.entries[(row, col)];
                    if e != cr(0.0) {
                        od[subsystem] = row;
                        v[join_index(&od, &out_dims)] += e * amp;
                    }
                }
            }
            out += &v * v.adjoint();
        }
    }
    Ok(DensityMatrix::trusted(out, out_dims))
}

/// `(1 ⊗ Υ)|Φ⁺_d⟩⟨Φ⁺_d|`.
pub fn choi_state(ks: &KrausSet, d: usize) -> Result<DensityMatrix> {
    if ks.input_dim != d {
        return invalid(format!("channel input dimension {} differs from {d}", ks.input_dim));
    }
    let mut phi = CVector::zeros(d * d);
    for i in 0..d {
        phi[i * d + i] = cr(1.0 / (d as f64).sqrt());
    }
    apply_kraus(&DensityMatrix::from_pure(&phi, vec![d, d])?, ks, 1)
}

/// Both sides of the factorization law `E[(1⊗Υ)χ] = E[(1⊗Υ)Φ⁺]·E[χ]`
/// for concurrence and for negativity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionCheck {
    pub concurrence_out: f64,
    pub concurrence_product: f64,
    pub negativity_out: f64,
    pub negativity_product: f64,
}

pub fn concurrence_evolution_check(chi: &CVector, ks: &KrausSet) -> Result<EvolutionCheck> {
    if ks.input_dim != 2 || ks.output_dim != 2 {
        return invalid("evolution law needs a qubit channel");
    }
    let rho = DensityMatrix::from_pure(chi, vec![2, 2])?;
    let out = apply_kraus(&rho, ks, 1)?;
    let choi = choi_state(ks, 2)?;
    Ok(EvolutionCheck {
        concurrence_out: concurrence(&out)?,
        concurrence_product: concurrence(&choi)? * concurrence(&rho)?,
        negativity_out: negativity(&out, 1)?,
        negativity_product: negativity(&choi, 1)? * negativity(&rho, 1)?,
    })
}

/// Concurrence of `(|0⟩|α⟩ + |1⟩|−α⟩)/√2` after photon loss on the qumode:
/// `τ √(1 − λ²)` with `τ = e^{−2(1−η)α²}`, `λ = e^{−2ηα²}`.
pub fn damped_concurrence(alpha: f64, eta: f64) -> f64 {
    let a2 = alpha * alpha;
    (-2.0 * (1.0 - eta) * a2).exp() * (-(-4.0 * eta * a2).exp_m1()).max(0.0).sqrt()
}

/// The published closed form for the same quantity. It agrees with
/// [`damped_concurrence`] only at `η ∈ {0, 1}` or `α = 0`.
pub fn damped_concurrence_published(alpha: f64, eta: f64) -> f64 {
    let a2 = alpha * alpha;
    let l = (-4.0 * (1.0 - eta) * a2).exp();
    0.5 * (1.0 - (-4.0 * eta * a2).exp()).sqrt() * ((1.0 + 3.0 * l).sqrt() - (1.0 - l).max(0.0).sqrt())
}

/// Photon loss on every qumode slot of a coherent-family hybrid state.
///
/// Per term, the environment leaves the coherence matrix
/// `Λ_ij = c_i c_j* Π⟨tα_j|tα_i⟩`; its eigenvectors become the new terms
/// over kets `|sα_i⟩`, with `s = √η`, `t = √(1−η)`.
pub fn amplitude_damp(state: &HybridState, eta: f64) -> Result<HybridState> {
    ThermalChannelParams::new(eta, 0.0)?;
    for t in state.terms() {
        for b in &t.branches {
            for f in &b.factors {
                if let Factor::Ket(k) = f {
                    if k.coherent_amplitude().is_none() {
                        return Err(Error::UnsupportedKet(format!("{k:?} under photon loss")));
                    }
                }
            }
        }
    }
    if eta == 1.0 {
        return Ok(state.clone());
    }
    let (s, tr) = (eta.sqrt(), (1.0 - eta).sqrt());
    let mut terms = Vec::new();
    for term in state.terms() {
        let bs = &term.branches;
        let n = bs.len();
        let env = |b: &Branch| -> Vec<Complex64> {
            b.factors
                .iter()
                .filter_map(|f| match f {
                    Factor::Ket(k) => k.coherent_amplitude().map(|a| a * tr),
                    Factor::Level(_) => None,
                })
                .collect()
        };
        let lambda = CMatrix::from_fn(n, n, |i, j| {
            let ov: Complex64 = env(&bs[i])
                .iter()
                .zip(env(&bs[j]))
                .map(|(a, b)| crate::fock::overlap_coherent(*a, b))
                .product();
            bs[i].coeff * bs[j].coeff.conj() * ov
        });
        let damped: Vec<Branch> = bs
            .iter()
            .map(|b| {
                let factors = b
                    .factors
                    .iter()
                    .map(|f| match f {
                        Factor::Ket(k) => Factor::Ket(k.scale_amplitude(s).expect("coherent checked")),
                        other => *other,
                    })
                    .collect();
                Branch::new(cr(1.0), factors)
            })
            .collect();
        let (vals, vecs) = herm_eigen(&lambda);
        for k in (0..n).rev() {
            let mu = vals[k];
            if mu < 1e-15 {
                continue;
            }
            let w = fix_phase(vecs.column(k).into_owned());
            let branches: Vec<Branch> = damped
                .iter()
                .zip(w.iter())
                .filter(|(_, c)| c.norm() > 0.0)
                .map(|(b, c)| Branch::new(*c, b.factors.clone()))
                .collect();
            let norm = branch_norm_sqr(&branches);
            if norm < 1e-15 {
                continue;
            }
            let scale = cr(1.0 / norm.sqrt());
            let branches = branches
                .into_iter()
                .map(|b| Branch::new(b.coeff * scale, b.factors))
                .collect();
            terms.push(Term::new(term.prob * mu * norm, branches));
        }
    }
    let total: f64 = terms.iter().map(|t| t.prob).sum();
    for t in &mut terms {
        t.prob /= total;
    }
    Ok(HybridState::new(state.slots().to_vec(), terms)?.with_family(state.family().clone()))
}

/// Rotate so the largest component is real and positive.
fn fix_phase(v: CVector) -> CVector {
    let k = (0..v.len())
        .max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()))
        .unwrap_or(0);
    let ph = v[k].conj() / cr(v[k].norm());
    v * ph
}

fn branch_norm_sqr(branches: &[Branch]) -> f64 {
    let mut acc = cr(0.0);
    for bi in branches {
        for bj in branches {
            let ov: Complex64 = bi
                .factors
                .iter()
                .zip(&bj.factors)
                .map(|(x, y)| match (x, y) {
                    (Factor::Level(a), Factor::Level(b)) => cr(if a == b { 1.0 } else { 0.0 }),
                    (Factor::Ket(a), Factor::Ket(b)) => crate::kets::braket(a, b),
                    _ => cr(0.0),
                })
                .product();
            acc += bi.coeff.conj() * bj.coeff * ov;
        }
    }
    acc.re
}

/// `tr[a†^k a^l Υ(|α⟩⟨β|)]` for the thermal channel, in closed form:
/// `⟨β|α⟩ Σ_i C(k,i) C(l,i) i! ((1−η)n̄)^i (√η β*)^{k−i} (√η α)^{l−i}`.
pub fn thermal_dyad_moments(
    alpha: Complex64,
    beta: Complex64,
    params: ThermalChannelParams,
    powers: (usize, usize),
) -> Complex64 {
    let (k, l) = powers;
    let s = params.eta.sqrt();
    let noise = (1.0 - params.eta) * params.n_th;
    let mut acc = cr(0.0);
    for i in 0..=k.min(l) {
        acc += cpowi((beta * s).conj(), k - i)
            * cpowi(alpha * s, l - i)
            * (binomial(k, i) * binomial(l, i) * factorial(i) * noise.powi(i as i32));
    }
    crate::fock::overlap_coherent(alpha, beta) * acc
}

/// The thermal channel applied to the qumode of a bipartite coherent-family
/// state, kept symbolically as the input plus channel parameters.
#[derive(Debug, Clone)]
pub struct ThermalOutput {
    pub input: HybridState,
    pub params: ThermalChannelParams,
}

impl ThermalOutput {
    pub fn new(input: HybridState, params: ThermalChannelParams) -> Result<Self> {
        if input.slots().len() != 2 || input.slots()[1] != crate::compression::Slot::Qumode {
            return invalid("thermal output needs a qudit-qumode state");
        }
        for t in input.terms() {
            for b in &t.branches {
                if let Factor::Ket(k) = &b.factors[1] {
                    if k.coherent_amplitude().is_none() {
                        return Err(Error::UnsupportedKet(format!("{k:?} under thermal noise")));
                    }
                }
            }
        }
        Ok(ThermalOutput { input, params })
    }

    /// `tr[(B ⊗ a†^k a^l) ρ']` for a qudit operator `B`.
    pub fn moment(&self, qudit_op: &CMatrix, powers: (usize, usize)) -> Complex64 {
        let mut acc = cr(0.0);
        for t in self.input.terms() {
            for bi in &t.branches {
                for bj in &t.branches {
                    let (Factor::Level(li), Factor::Ket(ki)) = (&bi.factors[0], &bi.factors[1]) else {
                        continue;
                    };
                    let (Factor::Level(lj), Factor::Ket(kj)) = (&bj.factors[0], &bj.factors[1]) else {
                        continue;
                    };
                    let q = qudit_op[(*lj, *li)];
                    if q == cr(0.0) {
                        continue;
                    }
                    let a = ki.coherent_amplitude().unwrap_or_default();
                    let b = kj.coherent_amplitude().unwrap_or_default();
                    acc += bi.coeff * bj.coeff.conj() * q * thermal_dyad_moments(a, b, self.params, powers) * t.prob;
                }
            }
        }
        acc
    }

    /// Truncated density matrix through the Kraus path, for cross-checks.
    pub fn kraus_density(&self, n_cut: usize) -> Result<DensityMatrix> {
        let rho = self.input.fock_density(&[n_cut])?;
        let ks = thermal_kraus(self.params, thermal_env_cutoff(self.params.n_th), n_cut)?;
        apply_kraus(&rho, &ks, 1)
    }
}

impl crate::compression::Classify for ThermalOutput {
    fn classification(&self) -> crate::compression::Classification {
        if self.params.n_th > 0.0 {
            crate::compression::Classification::TrulyHybrid
        } else {
            self.input.classification()
        }
    }
}

/// Photon loss acting on a single ket: `|α⟩ → |√η α⟩`.
pub fn damp_ket(ket: &SymbolicKet, eta: f64) -> Result<SymbolicKet> {
    ket.scale_amplitude(eta.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compression::{compress, Classify};
    use crate::fock::{linear_optics_unitary, mode_operators, LinearOptic};

    fn he_state(alpha: f64) -> HybridState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        HybridState::bipartite(
            2,
            vec![(
                1.0,
                vec![
                    (cr(s), 0, SymbolicKet::coherent(cr(alpha))),
                    (cr(s), 1, SymbolicKet::coherent(cr(-alpha))),
                ],
            )],
        )
        .unwrap()
    }

    #[test]
    fn damped_weights() {
        let (eta, alpha) = (0.5, 1.0);
        let out = amplitude_damp(&he_state(alpha), eta).unwrap();
        let tau = (-2.0 * (1.0 - eta) * alpha * alpha).exp();
        assert_eq!(out.terms().len(), 2);
        assert!((out.terms()[0].prob - (1.0 + tau) / 2.0).abs() < 1e-12);
        assert!((out.terms()[1].prob - (1.0 - tau) / 2.0).abs() < 1e-12);
        let p = crate::composite::purity(&compress(&out).unwrap());
        assert!((p - (1.0 + tau * tau) / 2.0).abs() < 1e-12);
        assert_eq!(amplitude_damp(&he_state(alpha), 1.0).unwrap(), he_state(alpha));
    }

    #[test]
    fn damping_rejects_squeezed() {
        let st = HybridState::bipartite(
            2,
            vec![(
                1.0,
                vec![(cr(1.0), 0, SymbolicKet::squeezed_coherent(cr(0.5), 0.3, 0.0))],
            )],
        )
        .unwrap();
        assert!(matches!(amplitude_damp(&st, 0.5), Err(Error::UnsupportedKet(_))));
    }

    #[test]
    fn thermal_kraus_is_complete() {
        let p = ThermalChannelParams::new(2.0 / 3.0, 1.0).unwrap();
        let ks = thermal_kraus(p, thermal_env_cutoff(1.0), 12).unwrap();
        assert!(ks.completeness_residual < 1e-8, "{}", ks.completeness_residual);
        assert!(thermal_kraus(p, 3, 12).is_err());
    }

    #[test]
    fn zero_temperature_is_amplitude_damping() {
        let eta = 0.4;
        let th = thermal_kraus(ThermalChannelParams::new(eta, 0.0).unwrap(), 0, 8).unwrap();
        let ad = amplitude_damping_kraus(eta, 8).unwrap();
        assert_eq!(th.operators.len(), ad.operators.len());
        for (a, b) in th.operators.iter().zip(&ad.operators) {
            assert!((&a.entries - &b.entries).norm() < 1e-12);
        }
    }

    #[test]
    fn kraus_matches_beam_splitter() {
        // K_m0 = ⟨m|_E U |0⟩_E for the two-mode beam splitter unitary
        let eta: f64 = 0.7;
        let n = 8;
        let d = n + 1;
        let u = linear_optics_unitary(
            LinearOptic::BeamSplit {
                theta: eta.sqrt().acos(),
                phi: 0.0,
            },
            n,
        )
        .unwrap();
        let ad = amplitude_damping_kraus(eta, n).unwrap();
        for m in 0..4 {
            let mut k = CMatrix::zeros(d, d);
            for out in 0..d {
                for inp in 0..d {
                    k[(out, inp)] = u.entries[(out * d + m, inp * d)];
                }
            }
            let diff = (k.map(|z| z.norm()) - ad.operators[m].entries.map(|z| z.norm())).norm();
            assert!(diff < 1e-10, "m = {m}: {diff}");
        }
    }

    #[test]
    fn thermal_moments_agree() {
        let p = ThermalChannelParams::new(0.5, 1.0).unwrap();
        let out = ThermalOutput::new(he_state(1.0), p).unwrap();
        assert_eq!(out.classification(), crate::compression::Classification::TrulyHybrid);
        let id = CMatrix::identity(2, 2);
        assert!((out.moment(&id, (1, 1)) - cr(1.0)).norm() < 1e-12);
        let rho = out.kraus_density(20).unwrap();
        let nmode = rho.dims()[1] - 1;
        let (a, _, _) = mode_operators(nmode).unwrap();
        let mut sx = CMatrix::zeros(2, 2);
        sx[(0, 1)] = cr(1.0);
        let op = sx.kronecker(&(a.entries.adjoint() * &a.entries * &a.entries));
        let numeric = (rho.entries() * op).trace();
        let closed = out.moment(&sx, (1, 2));
        assert!((numeric - closed).norm() < 1e-8, "{numeric} vs {closed}");
    }

    #[test]
    fn qubit_loss_on_excited() {
        let ks = qubit_loss_kraus(0.3).unwrap();
        let mut one = CMatrix::zeros(2, 2);
        one[(1, 1)] = cr(1.0);
        let out = apply_kraus(&DensityMatrix::new(one, vec![2]).unwrap(), &ks, 0).unwrap();
        assert!((out.entries()[(1, 1)].re - 0.3).abs() < 1e-15);
        assert!((out.entries()[(0, 0)].re - 0.7).abs() < 1e-15);
    }

    #[test]
    fn choi_and_evolution() {
        let eta = 0.5;
        let ks = qubit_loss_kraus(eta).unwrap();
        let choi = choi_state(&ks, 2).unwrap();
        assert!((negativity(&choi, 1).unwrap() - eta / 2.0).abs() < 1e-12);
        let w: f64 = 0.25;
        let chi = CVector::from_vec(vec![cr(w.sqrt()), cr(0.0), cr(0.0), cr((1.0 - w).sqrt())]);
        let r = concurrence_evolution_check(&chi, &ks).unwrap();
        assert!((r.concurrence_out - r.concurrence_product).abs() < 1e-10);
        assert!((r.negativity_out - r.negativity_product).abs() > 1e-3);
        let root = ((1.0 - eta).powi(2) + 4.0 * eta * w / (1.0 - w)).sqrt();
        let want = (1.0 - w) / 2.0 * (root - (1.0 - eta));
        assert!((r.negativity_out - want).abs() < 1e-12);
    }
}
