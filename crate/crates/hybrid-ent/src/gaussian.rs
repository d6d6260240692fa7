//! Covariance-matrix description of Gaussian states.
//!
//! Quadratures are ordered `(x₁, p₁, …, x_N, p_N)`, the symplectic form is
//! `J = ⊕ ((0, 1), (−1, 0))` and the vacuum has covariance `𝟙`, so physical
//! states satisfy `γ + iJ ≥ 0`.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Result};
use crate::linalg::{cr, herm_eigenvalues, CMatrix};

pub const SYMMETRY_TOL: f64 = 1e-12;
pub const HEISENBERG_TOL: f64 = 1e-10;

pub type RMatrix = DMatrix<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    covariance: RMatrix,
    displacement: DVector<f64>,
}

impl GaussianState {
    pub fn new(covariance: RMatrix, displacement: DVector<f64>) -> Result<Self> {
        let n = covariance.nrows();
        if n == 0 || !n.is_multiple_of(2) || covariance.ncols() != n {
            return invalid(format!("covariance must be 2N×2N, got {}×{}", n, covariance.ncols()));
        }
        if displacement.len() != n {
            return invalid("displacement length differs from covariance size");
        }
        check_symmetric(&covariance)?;
        let h = heisenberg_min_eigenvalue(&covariance);
        if h < -HEISENBERG_TOL {
            return invalid(format!("uncertainty relation violated: min eig(γ + iJ) = {h:e}"));
        }
        Ok(GaussianState {
            covariance,
            displacement,
        })
    }

    pub fn vacuum(modes: usize) -> Self {
        GaussianState {
            covariance: RMatrix::identity(2 * modes, 2 * modes),
            displacement: DVector::zeros(2 * modes),
        }
    }

    /// Single-mode thermal state, variance `2n̄ + 1`.
    pub fn thermal(n_bar: f64) -> Result<Self> {
        if !(n_bar >= 0.0) {
            return invalid(format!("mean photon number {n_bar} is negative"));
        }
        GaussianState::new(RMatrix::identity(2, 2) * (2.0 * n_bar + 1.0), DVector::zeros(2))
    }

    /// Two-mode squeezed vacuum: a balanced beam splitter on two vacua
    /// squeezed in opposite quadratures.
    pub fn two_mode_squeezed(r: f64) -> Self {
        let s = direct_sum(&squeezer(r), &squeezer(-r));
        GaussianState::vacuum(2).transformed(&(beam_splitter(std::f64::consts::FRAC_PI_4) * s))
    }

    pub fn covariance(&self) -> &RMatrix {
        &self.covariance
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.displacement
    }

    pub fn modes(&self) -> usize {
        self.covariance.nrows() / 2
    }

    /// `γ → S γ Sᵀ`, `d → S d`.
    pub fn transformed(&self, s: &RMatrix) -> Self {
        GaussianState {
            covariance: s * &self.covariance * s.transpose(),
            displacement: s * &self.displacement,
        }
    }
}

fn check_symmetric(gamma: &RMatrix) -> Result<()> {
    let defect = (gamma - gamma.transpose()).abs().max();
    if defect > SYMMETRY_TOL {
        return invalid(format!("covariance asymmetric by {defect:e}"));
    }
    Ok(())
}

pub fn symplectic_form(modes: usize) -> RMatrix {
    let mut j = RMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        j[(2 * k, 2 * k + 1)] = 1.0;
        j[(2 * k + 1, 2 * k)] = -1.0;
    }
    j
}

/// `diag(e^{−r}, e^{r})`.
pub fn squeezer(r: f64) -> RMatrix {
    RMatrix::from_diagonal(&DVector::from_vec(vec![(-r).exp(), r.exp()]))
}

pub fn phase_rotation(phi: f64) -> RMatrix {
    let (s, c) = phi.sin_cos();
    RMatrix::from_row_slice(2, 2, &[c, s, -s, c])
}

/// Two-mode mixer with transmission amplitude `cos θ`.
pub fn beam_splitter(theta: f64) -> RMatrix {
    let (s, c) = theta.sin_cos();
    let mut m = RMatrix::zeros(4, 4);
    for q in 0..2 {
        m[(q, q)] = c;
        m[(q + 2, q + 2)] = c;
        m[(q, q + 2)] = s;
        m[(q + 2, q)] = -s;
    }
    m
}

pub fn direct_sum(a: &RMatrix, b: &RMatrix) -> RMatrix {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = RMatrix::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (m, m)).copy_from(b);
    out
}

/// Places a one- or two-mode symplectic on the listed modes of an
/// `modes`-mode system.
pub fn embed(op: &RMatrix, on: &[usize], modes: usize) -> Result<RMatrix> {
    if op.nrows() != 2 * on.len() || on.iter().any(|&m| m >= modes) {
        return invalid("embedding does not match operator size or mode count");
    }
    let mut out = RMatrix::identity(2 * modes, 2 * modes);
    for (i, &mi) in on.iter().enumerate() {
        for (j, &mj) in on.iter().enumerate() {
            for a in 0..2 {
                for b in 0..2 {
                    out[(2 * mi + a, 2 * mj + b)] = op[(2 * i + a, 2 * j + b)];
                }
            }
        }
    }
    Ok(out)
}

/// `max |S J Sᵀ − J|`.
pub fn symplectic_defect(s: &RMatrix) -> f64 {
    let j = symplectic_form(s.nrows() / 2);
    (s * &j * s.transpose() - j).abs().max()
}

/// Smallest eigenvalue of `γ + iJ`.
pub fn heisenberg_min_eigenvalue(gamma: &RMatrix) -> f64 {
    let j = symplectic_form(gamma.nrows() / 2);
    let m = CMatrix::from_fn(gamma.nrows(), gamma.ncols(), |a, b| {
        num_complex::Complex64::new(gamma[(a, b)], j[(a, b)])
    });
    herm_eigenvalues(&m)[0]
}

/// Williamson invariants `μ_i`, descending, from the spectrum `±μ_i` of
/// `γ^{1/2} (iJ) γ^{1/2}`.
pub fn symplectic_eigenvalues(gamma: &RMatrix) -> Result<Vec<f64>> {
    let n = gamma.nrows();
    if n == 0 || !n.is_multiple_of(2) || gamma.ncols() != n {
        return invalid("covariance must be 2N×2N");
    }
    check_symmetric(gamma)?;
    let eig = gamma.clone().symmetric_eigen();
    if eig.eigenvalues.min() <= 0.0 {
        return invalid("covariance is not positive definite");
    }
    let root =
        &eig.eigenvectors * RMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * eig.eigenvectors.transpose();
    let j = symplectic_form(n / 2);
    let ij = CMatrix::from_fn(n, n, |a, b| num_complex::Complex64::new(0.0, j[(a, b)]));
    let rc = root.map(cr);
    let m = &rc * ij * &rc;
    let mut vals = herm_eigenvalues(&m);
    vals.reverse();
    vals.truncate(n / 2);
    Ok(vals)
}

/// Rows and columns of the listed modes.
pub fn reduced_covariance(gamma: &RMatrix, modes: &[usize]) -> Result<RMatrix> {
    let total = gamma.nrows() / 2;
    if modes.iter().any(|&m| m >= total) {
        return invalid("mode index out of range");
    }
    let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
    Ok(RMatrix::from_fn(idx.len(), idx.len(), |a, b| gamma[(idx[a], idx[b])]))
}

fn g_entropy(mu: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    let (plus, minus) = ((mu + 1.0) / 2.0, (mu - 1.0) / 2.0);
    term(plus) - term(minus.max(0.0))
}

/// Entanglement entropy in bits of a pure Gaussian state across the cut
/// that gives Alice the listed modes.
pub fn gaussian_entropy(gamma: &RMatrix, alice: &[usize]) -> Result<f64> {
    let global = symplectic_eigenvalues(gamma)?;
    if global.iter().any(|mu| (mu - 1.0).abs() > 1e-8) {
        return invalid("entropy of entanglement needs a pure global state");
    }
    let reduced = symplectic_eigenvalues(&reduced_covariance(gamma, alice)?)?;
    Ok(reduced.into_iter().map(g_entropy).sum())
}

/// `p → −p` on the listed modes.
pub fn partial_transpose_covariance(gamma: &RMatrix, modes: &[usize]) -> RMatrix {
    let mut flip = DVector::from_element(gamma.nrows(), 1.0);
    for &m in modes {
        flip[2 * m + 1] = -1.0;
    }
    let l = RMatrix::from_diagonal(&flip);
    &l * gamma * &l
}

/// `E_N = −Σ log₂ min(1, μ̃_i)` from the partially transposed covariance.
pub fn gaussian_log_negativity(gamma: &RMatrix, bob: &[usize]) -> Result<f64> {
    let mu = symplectic_eigenvalues(&partial_transpose_covariance(gamma, bob))?;
    Ok(mu.into_iter().map(|m| -(m.min(1.0)).log2()).sum())
}

/// Whether `γ^Γ + iJ ≥ 0` holds within tolerance.
pub fn is_ppt(gamma: &RMatrix, bob: &[usize]) -> bool {
    heisenberg_min_eigenvalue(&partial_transpose_covariance(gamma, bob)) >= -HEISENBERG_TOL
}

/// The same two-mode squeezed vacuum on a Fock truncation of `n_cut`
/// photons per mode, built from single-mode squeezers and a beam splitter
/// and renormalized after the cut. Layout: mode 0 major.
pub fn two_mode_squeezed_fock(r: f64, n_cut: usize) -> Result<crate::linalg::CVector> {
    use crate::fock::{beamsplit_table, linear_optics_unitary, LinearOptic};
    let total = 2 * n_cut;
    let col = |r: f64| -> Result<crate::linalg::CVector> {
        let u = linear_optics_unitary(LinearOptic::Squeeze { theta: 0.0, r }, total)?;
        Ok(u.entries.column(0).into_owned())
    };
    let (s1, s2) = (col(r)?, col(-r)?);
    let table = &s1 * s2.transpose();
    let out = beamsplit_table(&table, std::f64::consts::FRAC_PI_4, 0.0, total);
    let dim = n_cut + 1;
    let mut v = crate::linalg::CVector::from_fn(dim * dim, |k, _| out[(k / dim, k % dim)]);
    let n = v.norm();
    v /= cr(n);
    Ok(v)
}
