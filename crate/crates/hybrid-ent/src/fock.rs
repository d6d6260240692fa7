//! Truncated Fock-space numerics.
//!
//! Mode operators, coherent states, the four linear-optical unitaries,
//! Hermite polynomials, Fock wavefunctions and the Wigner function.
//! Quadratures follow `a = (x + i p)/√2`, so the vacuum wavefunction is
//! `π^{-1/4} e^{-x²/2}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::composite::DensityMatrix;
use crate::error::{invalid, Error, Result};
use crate::linalg::{c, cr, expm_anti_hermitian, CMatrix, CVector, I};

/// Default truncation tolerance on the neglected Fock tail weight.
pub const TAIL_TOL: f64 = 1e-10;

/// Cutoff that keeps the Poisson tail of `|α|² ≤ alpha_sq_max` far below [`TAIL_TOL`].
pub fn default_cutoff(alpha_sq_max: f64) -> usize {
    let a = alpha_sq_max.max(0.0);
    (a + 8.0 * (a + 1.0).sqrt() + 10.0).ceil() as usize
}

/// Amplitudes over `|0⟩..|n_cut⟩` with the weight lost to truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amplitudes: CVector,
    pub n_cut: usize,
    pub tail_weight: f64,
}

impl FockVector {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// `⟨other|self⟩`.
    pub fn overlap(&self, other: &FockVector) -> Complex64 {
        other.amplitudes.dotc(&self.amplitudes)
    }
}

/// Dense operator on a truncated space. Rectangular shapes are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub entries: CMatrix,
    pub hermitian: bool,
}

impl Operator {
    pub fn new(entries: CMatrix) -> Self {
        Operator {
            entries,
            hermitian: false,
        }
    }

    pub fn hermitian(entries: CMatrix) -> Self {
        Operator {
            entries,
            hermitian: true,
        }
    }

    pub fn identity(n: usize) -> Self {
        Operator::hermitian(CMatrix::identity(n, n))
    }

    pub fn dims(&self) -> (usize, usize) {
        self.entries.shape()
    }

    pub fn dagger(&self) -> Operator {
        Operator {
            entries: self.entries.adjoint(),
            hermitian: self.hermitian,
        }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.entries * v
    }
}

/// Annihilation, creation and number operators on `|0⟩..|n_cut⟩`.
pub fn mode_operators(n_cut: usize) -> Result<(Operator, Operator, Operator)> {
    if n_cut < 1 {
        return invalid("mode operators need n_cut >= 1");
    }
    let a = annihilation(n_cut + 1);
    let ad = a.adjoint();
    let n = &ad * &a;
    Ok((Operator::new(a), Operator::new(ad), Operator::hermitian(n)))
}

/// `dim × dim` lowering matrix with `⟨k−1|a|k⟩ = √k`.
pub(crate) fn annihilation(dim: usize) -> CMatrix {
    let mut a = CMatrix::zeros(dim, dim);
    for k in 1..dim {
        a[(k - 1, k)] = cr((k as f64).sqrt());
    }
    a
}

/// Coherent amplitudes `e^{-|α|²/2} αⁿ/√n!` without any tail check.
pub fn coherent_amplitudes(alpha: Complex64, n_cut: usize) -> CVector {
    let mut v = CVector::zeros(n_cut + 1);
    let mut amp = cr((-0.5 * alpha.norm_sqr()).exp());
    for n in 0..=n_cut {
        v[n] = amp;
        amp = amp * alpha / ((n + 1) as f64).sqrt();
    }
    v
}

/// Truncated coherent state; fails when the discarded tail exceeds [`TAIL_TOL`].
pub fn coherent_ket(alpha: Complex64, n_cut: usize) -> Result<FockVector> {
    let amplitudes = coherent_amplitudes(alpha, n_cut);
    let tail_weight = (1.0 - amplitudes.norm_squared()).max(0.0);
    if tail_weight > TAIL_TOL {
        return Err(Error::CutoffTooSmall {
            given: n_cut,
            suggested: default_cutoff(alpha.norm_sqr()),
            tol: TAIL_TOL,
        });
    }
    Ok(FockVector {
        amplitudes,
        n_cut,
        tail_weight,
    })
}

/// `⟨β|α⟩ = exp(−|α|²/2 − |β|²/2 + β*α)`.
pub fn overlap_coherent(alpha: Complex64, beta: Complex64) -> Complex64 {
    (-0.5 * alpha.norm_sqr() - 0.5 * beta.norm_sqr() + beta.conj() * alpha).exp()
}

/// The four linear-optical elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinearOptic {
    /// `D(α) = exp(α a† − α* a)`
    Displace(Complex64),
    /// `exp(i φ a†a)`
    Phase(f64),
    /// `exp(θ(e^{iφ} a₁†a₂ − e^{−iφ} a₁a₂†))`, acting on two modes.
    BeamSplit { theta: f64, phi: f64 },
    /// `exp(½ r (e^{−iθ} a² − e^{iθ} a†²))`
    Squeeze { theta: f64, r: f64 },
}

/// Unitary of a linear-optical element on the truncated space.
///
/// Single-mode generators are exponentiated on a padded space and the
/// leading block is returned, so matrix elements between low Fock states
/// match the untruncated operator. The beam splitter conserves total photon
/// number and is exact on the two-mode product space of `(n_cut+1)²`.
pub fn linear_optics_unitary(kind: LinearOptic, n_cut: usize) -> Result<Operator> {
    if n_cut < 1 {
        return invalid("linear optics need n_cut >= 1");
    }
    let dim = n_cut + 1;
    match kind {
        LinearOptic::Phase(phi) => {
            let diag = CVector::from_iterator(dim, (0..dim).map(|n| (I * phi * n as f64).exp()));
            Ok(Operator::new(CMatrix::from_diagonal(&diag)))
        }
        LinearOptic::Displace(alpha) => {
            let pad = padded_dim(dim, alpha.norm_sqr());
            let a = annihilation(pad);
            let g = a.adjoint() * alpha - &a * alpha.conj();
            let u = expm_anti_hermitian(&g);
            let block = u.view((0, 0), (dim, dim)).into_owned();
            check_column_leak(&u, dim, 0)?;
            Ok(Operator::new(block))
        }
        LinearOptic::Squeeze { theta, r } => {
            let pad = padded_dim(dim, r.sinh().powi(2) * 4.0 + 4.0 * r.abs());
            let a = annihilation(pad);
            let a2 = &a * &a;
            let g = (&a2 * (-I * theta).exp() - a2.adjoint() * (I * theta).exp()) * cr(0.5 * r);
            let u = expm_anti_hermitian(&g);
            check_column_leak(&u, dim, 0)?;
            Ok(Operator::new(u.view((0, 0), (dim, dim)).into_owned()))
        }
        LinearOptic::BeamSplit { theta, phi } => {
            let a = annihilation(dim);
            let id = CMatrix::identity(dim, dim);
            let a1 = a.kronecker(&id);
            let a2 = id.kronecker(&a);
            let g = (a1.adjoint() * &a2 * (I * phi).exp() - &a1 * a2.adjoint() * (-I * phi).exp()) * cr(theta);
            Ok(Operator::new(expm_anti_hermitian(&g)))
        }
    }
}

fn padded_dim(dim: usize, mean_photons: f64) -> usize {
    dim + default_cutoff(mean_photons) + dim / 2 + 10
}

fn check_column_leak(u: &CMatrix, dim: usize, col: usize) -> Result<()> {
    let kept: f64 = (0..dim).map(|r| u[(r, col)].norm_sqr()).sum();
    let leak = 1.0 - kept;
    if leak > 1e-8 {
        return Err(Error::CutoffTooSmall {
            given: dim - 1,
            suggested: 2 * dim,
            tol: 1e-8,
        });
    }
    Ok(())
}

/// Apply a beam splitter to a two-mode amplitude table `t[(n1, n2)]`.
///
/// The table is treated as a state truncated by total photon number
/// `n1 + n2 ≤ max_total`; each fixed-total block is exponentiated exactly.
pub fn beamsplit_table(table: &CMatrix, theta: f64, phi: f64, max_total: usize) -> CMatrix {
    let (r1, r2) = table.shape();
    let mut out = CMatrix::zeros(r1.max(max_total + 1), r2.max(max_total + 1));
    for total in 0..=max_total {
        let size = total + 1;
        // block basis |k, total−k⟩, k = photons in mode 1
        let mut g = CMatrix::zeros(size, size);
        for k in 0..total {
            // a1† a2 |k, total−k⟩ = √(k+1)√(total−k) |k+1, total−k−1⟩
            let amp = ((k + 1) as f64 * (total - k) as f64).sqrt();
            g[(k + 1, k)] += (I * phi).exp() * amp * theta;
            g[(k, k + 1)] -= (-I * phi).exp() * amp * theta;
        }
        let u = expm_anti_hermitian(&g);
        let input = CVector::from_iterator(
            size,
            (0..size).map(|k| {
                let j = total - k;
                if k < r1 && j < r2 {
                    table[(k, j)]
                } else {
                    cr(0.0)
                }
            }),
        );
        let res = u * input;
        for k in 0..size {
            out[(k, total - k)] = res[k];
        }
    }
    out
}

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recursion.
pub fn hermite(n: i32, x: f64) -> Result<f64> {
    if n < 0 {
        return invalid("Hermite degree must be nonnegative");
    }
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return Ok(prev);
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Position wavefunction `H_n(x) e^{−x²/2} / √(2ⁿ n! √π)` of `|n⟩`.
///
/// Evaluated with the normalized recursion so large `n` neither overflows
/// nor underflows.
pub fn fock_wavefunction(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Sampled Wigner function with coverage diagnostics.
#[derive(Debug, Clone)]
pub struct WignerField {
    pub grid_x: Vec<f64>,
    pub grid_p: Vec<f64>,
    /// `values[(i, j)] = W(grid_x[i], grid_p[j])`
    pub values: nalgebra::DMatrix<f64>,
    /// Trapezoidal integral of `W` over the grid.
    pub integral: f64,
    /// Set when the grid misses more than 0.1 % of the quasi-probability.
    pub grid_too_small: bool,
}

impl WignerField {
    pub fn min(&self) -> f64 {
        self.values.min()
    }
}

/// `W(x,p) = (1/π) ∫ dy ⟨x−y|ρ|x+y⟩ e^{2ipy}` as a finite Fock double sum.
///
/// Uses the closed form for `|m⟩⟨n|` in terms of generalized Laguerre
/// polynomials, so the only approximation is the truncation already
/// present in `rho`.
pub fn wigner(rho: &DensityMatrix, grid_x: &[f64], grid_p: &[f64]) -> Result<WignerField> {
    if rho.dims().len() != 1 {
        return invalid("Wigner function needs a single-mode density matrix");
    }
    let m = rho.entries();
    let dim = m.nrows();
    let ln_fact: Vec<f64> = (0..dim)
        .scan(0.0, |acc, k| {
            if k > 0 {
                *acc += (k as f64).ln();
            }
            Some(*acc)
        })
        .collect();
    let mut values = nalgebra::DMatrix::<f64>::zeros(grid_x.len(), grid_p.len());
    for (ix, &x) in grid_x.iter().enumerate() {
        for (ip, &p) in grid_p.iter().enumerate() {
            values[(ix, ip)] = wigner_point(m, x, p, &ln_fact);
        }
    }
    let integral = trapezoid_2d(grid_x, grid_p, &values);
    Ok(WignerField {
        grid_x: grid_x.to_vec(),
        grid_p: grid_p.to_vec(),
        values,
        integral,
        grid_too_small: integral < 0.999,
    })
}

fn wigner_point(m: &CMatrix, x: f64, p: f64, ln_fact: &[f64]) -> f64 {
    let dim = m.nrows();
    let r2 = x * x + p * p;
    let t = 2.0 * r2;
    let z = c(x, -p) * std::f64::consts::SQRT_2;
    let (zabs, zarg) = (z.norm(), z.arg());
    let mut total = 0.0;
    for k in 0..dim {
        // Laguerre L_n^{(k)}(t) for n = 0..dim−k−1
        let mut l_prev = 0.0;
        let mut l_cur = 1.0;
        for n in 0..dim - k {
            let mm = n + k;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let term = if k == 0 {
                sign * (-r2).exp() * l_cur
            } else if zabs == 0.0 {
                0.0
            } else {
                let ln_mag = 0.5 * (ln_fact[n] - ln_fact[mm]) + k as f64 * zabs.ln() - r2;
                sign * ln_mag.exp() * l_cur
            };
            if k == 0 {
                total += m[(mm, n)].re * term;
            } else {
                let phase = Complex64::from_polar(1.0, k as f64 * zarg);
                total += 2.0 * (m[(mm, n)] * phase).re * term;
            }
            let nf = n as f64;
            let next = ((2.0 * nf + 1.0 + k as f64 - t) * l_cur - (nf + k as f64) * l_prev) / (nf + 1.0);
            l_prev = l_cur;
            l_cur = next;
        }
    }
    total / PI
}

/// Trapezoidal rule over a rectangular grid.
pub fn trapezoid_2d(xs: &[f64], ps: &[f64], values: &nalgebra::DMatrix<f64>) -> f64 {
    let wx = trapezoid_weights(xs);
    let wp = trapezoid_weights(ps);
    let mut acc = 0.0;
    for (i, a) in wx.iter().enumerate() {
        for (j, b) in wp.iter().enumerate() {
            acc += a * b * values[(i, j)];
        }
    }
    acc
}

pub fn trapezoid_weights(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut w = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let h = xs[k + 1] - xs[k];
        w[k] += 0.5 * h;
        w[k + 1] += 0.5 * h;
    }
    w
}

/// Evenly spaced grid including both ends.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![start],
        _ => (0..count)
            .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annihilation_lowers() {
        let (a, ad, n) = mode_operators(5).unwrap();
        let mut one = CVector::zeros(6);
        one[1] = cr(1.0);
        let out = a.apply(&one);
        assert!((out[0] - cr(1.0)).norm() < 1e-15);
        assert!(out.iter().skip(1).all(|z| z.norm() < 1e-15));
        let vac = CVector::from_fn(6, |i, _| if i == 0 { cr(1.0) } else { cr(0.0) });
        assert!(a.apply(&vac).norm() < 1e-15);
        assert_eq!(ad.entries, a.entries.adjoint());
        assert!((n.entries[(3, 3)] - cr(3.0)).norm() < 1e-14);
    }

    #[test]
    fn truncated_commutator() {
        let n_cut = 6;
        let (a, ad, _) = mode_operators(n_cut).unwrap();
        let comm = &a.entries * &ad.entries - &ad.entries * &a.entries;
        for i in 0..=n_cut {
            let want = if i == n_cut { -(n_cut as f64) } else { 1.0 };
            assert!((comm[(i, i)] - cr(want)).norm() < 1e-12);
        }
        assert!(mode_operators(0).is_err());
    }

    #[test]
    fn coherent_overlap_and_norm() {
        let alpha = cr(1.0);
        let n = default_cutoff(1.0);
        let k1 = coherent_ket(alpha, n).unwrap();
        let k2 = coherent_ket(-alpha, n).unwrap();
        assert!((k1.overlap(&k2).re - (-2.0f64).exp()).abs() < 1e-10);
        let k = coherent_ket(cr(2.0), default_cutoff(4.0)).unwrap();
        assert!((k.norm_sqr() - 1.0).abs() < 1e-10);
        let vac = coherent_ket(cr(0.0), 3).unwrap();
        assert!((vac.amplitudes[0] - cr(1.0)).norm() < 1e-15);
        assert!(matches!(coherent_ket(cr(3.0), 5), Err(Error::CutoffTooSmall { .. })));
    }

    #[test]
    fn overlap_bounds() {
        let z = c(0.3, -0.7);
        assert!((overlap_coherent(z, z) - cr(1.0)).norm() < 1e-15);
        assert!((overlap_coherent(z, -z).re - (-2.0 * z.norm_sqr()).exp()).abs() < 1e-15);
    }

    #[test]
    fn displacement_makes_coherent() {
        let alpha = c(0.8, 0.4);
        let n = default_cutoff(alpha.norm_sqr());
        let d = linear_optics_unitary(LinearOptic::Displace(alpha), n).unwrap();
        let col = d.entries.column(0).into_owned();
        let want = coherent_amplitudes(alpha, n);
        assert!((col - want).norm() < 1e-10);
        let id = linear_optics_unitary(LinearOptic::Displace(cr(0.0)), 4).unwrap();
        assert!((id.entries - CMatrix::identity(5, 5)).norm() < 1e-12);
    }

    #[test]
    fn beam_splitter_splits_coherent() {
        let alpha = cr(1.2);
        let eta: f64 = 0.7;
        let n = 26;
        let theta = eta.sqrt().acos();
        let u = linear_optics_unitary(LinearOptic::BeamSplit { theta, phi: 0.0 }, n).unwrap();
        let vac = coherent_amplitudes(cr(0.0), n);
        let input = crate::linalg::kron_vec(&coherent_amplitudes(alpha, n), &vac);
        let out = u.apply(&input);
        // e^{θ(a1†a2 − a1a2†)} moves amplitude from mode 1 to mode 2 with a minus sign
        let want = crate::linalg::kron_vec(
            &coherent_amplitudes(alpha * eta.sqrt(), n),
            &coherent_amplitudes(-alpha * (1.0 - eta).sqrt(), n),
        );
        assert!((out - want).norm() < 1e-8);
    }

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(0, 0.3).unwrap(), 1.0);
        assert!((hermite(1, 0.3).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(hermite(4, 1.0).unwrap(), -20.0);
        assert_eq!(hermite(3, 0.0).unwrap(), 0.0);
        assert!(hermite(-1, 0.0).is_err());
    }

    #[test]
    fn wavefunction_values() {
        assert!((fock_wavefunction(0, 0.0) - PI.powf(-0.25)).abs() < 1e-15);
        assert!(fock_wavefunction(1, 0.0).abs() < 1e-15);
    }

    #[test]
    fn vacuum_wigner_origin() {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = cr(1.0);
        let rho = DensityMatrix::new(m, vec![4]).unwrap();
        let w = wigner(&rho, &[0.0], &[0.0]).unwrap();
        assert!((w.values[(0, 0)] - 1.0 / PI).abs() < 1e-8);
    }
}
