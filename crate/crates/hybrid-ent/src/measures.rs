//! Entanglement measures. All logarithms are base 2.

use crate::composite::{partial_trace, partial_transpose, purity, DensityMatrix};
use crate::error::{invalid, Error, Result};
use crate::linalg::{cr, det, herm_eigen, herm_eigenvalues, CMatrix, CVector};

/// `−x log₂ x` with `0 log 0 = 0`.
fn xlog(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy `s(x) = −x log₂x − (1−x) log₂(1−x)`.
pub fn binary_entropy(x: f64) -> f64 {
    xlog(x) + xlog(1.0 - x)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues().into_iter().map(xlog).sum()
}

fn check_pure(psi: &CVector, dims: (usize, usize)) -> Result<()> {
    if psi.len() != dims.0 * dims.1 {
        return invalid(format!(
            "vector of length {} does not match {}x{}",
            psi.len(),
            dims.0,
            dims.1
        ));
    }
    let n = psi.norm_squared();
    if (n - 1.0).abs() > 1e-8 {
        return invalid(format!("state norm² {n} differs from 1"));
    }
    Ok(())
}

/// Entropy of either reduced state of a pure bipartite vector.
pub fn entropy_of_entanglement(psi: &CVector, dims: (usize, usize)) -> Result<f64> {
    let s = schmidt(psi, dims)?;
    Ok(s.coefficients.iter().map(|c| xlog(c * c)).sum())
}

#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Descending, strictly positive.
    pub coefficients: Vec<f64>,
    /// Columns are the left Schmidt vectors.
    pub left: CMatrix,
    /// Columns are the right Schmidt vectors.
    pub right: CMatrix,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn reconstruct(&self) -> CVector {
        let (da, db) = (self.left.nrows(), self.right.nrows());
        let mut out = CVector::zeros(da * db);
        for (k, s) in self.coefficients.iter().enumerate() {
            for i in 0..da {
                for j in 0..db {
                    out[i * db + j] += self.left[(i, k)] * self.right[(j, k)] * *s;
                }
            }
        }
        out
    }
}

/// Schmidt decomposition by singular values of the coefficient matrix.
/// Coefficients below `1e-12` are dropped.
pub fn schmidt(psi: &CVector, dims: (usize, usize)) -> Result<SchmidtDecomposition> {
    check_pure(psi, dims)?;
    let (da, db) = dims;
    let m = CMatrix::from_fn(da, db, |i, j| psi[i * db + j]);
    let svd = m.svd(true, true);
    let u = svd.u.expect("left vectors requested");
    let vt = svd.v_t.expect("right vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > 1e-12)
        .collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let r = order.len();
    let mut left = CMatrix::zeros(da, r);
    let mut right = CMatrix::zeros(db, r);
    for (col, &k) in order.iter().enumerate() {
        left.set_column(col, &u.column(k));
        right.set_column(col, &vt.row(k).transpose());
    }
    Ok(SchmidtDecomposition {
        coefficients: order.iter().map(|&k| svd.singular_values[k]).collect(),
        left,
        right,
    })
}

/// True when `a` is majorized by `b`: every partial sum of the descending
/// sort of `a` is at most that of `b`. The shorter vector is zero padded.
pub fn is_majorized_by(a: &[f64], b: &[f64]) -> Result<bool> {
    for v in [a, b] {
        let s: f64 = v.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return invalid(format!("probability vector sums to {s}"));
        }
    }
    let n = a.len().max(b.len());
    let sorted = |v: &[f64]| {
        let mut w = v.to_vec();
        w.resize(n, 0.0);
        w.sort_by(|x, y| y.total_cmp(x));
        w
    };
    let (a, b) = (sorted(a), sorted(b));
    let (mut sa, mut sb) = (0.0, 0.0);
    for k in 0..n {
        sa += a[k];
        sb += b[k];
        if sa > sb + 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::Inapplicable(format!(
            "concurrence needs a two-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Wootters concurrence. The square roots of the eigenvalues of `ρ ρ̃` are
/// taken as the singular values of `√ρ (σ_y⊗σ_y) √ρ*`, which avoids the
/// non-Hermitian eigenproblem.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.dims();
    if d.len() == 2 && d.contains(&1) && d.iter().all(|&n| n <= 2) {
        // one side collapsed to a single level: a product state
        return Ok(0.0);
    }
    require_two_qubits(rho)?;
    let r = clipped_sqrt(rho.entries());
    let mut yy = CMatrix::zeros(4, 4);
    yy[(0, 3)] = cr(-1.0);
    yy[(1, 2)] = cr(1.0);
    yy[(2, 1)] = cr(1.0);
    yy[(3, 0)] = cr(-1.0);
    let m = &r * yy * r.conjugate();
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).max(0.0))
}

/// Square root with eigenvalues below `1e-13` set to zero, so rounding
/// noise in a rank-deficient state does not leak through as `√1e-16`.
fn clipped_sqrt(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = herm_eigen(m);
    let roots = CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&l| cr(if l > 1e-13 { l.sqrt() } else { 0.0 })),
    );
    &vecs * CMatrix::from_diagonal(&roots) * vecs.adjoint()
}

/// Entanglement of formation from concurrence.
pub fn formation_from_concurrence(c: f64) -> f64 {
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt()))
}

/// `Σ (|λ| − λ)/2` over the partial-transpose spectrum.
pub fn negativity(rho: &DensityMatrix, subsystem: usize) -> Result<f64> {
    let pt = partial_transpose(rho, subsystem)?;
    Ok(herm_eigenvalues(&pt.entries)
        .into_iter()
        .map(|l| (l.abs() - l) / 2.0)
        .sum())
}

pub fn log_negativity(rho: &DensityMatrix, subsystem: usize) -> Result<f64> {
    Ok((1.0 + 2.0 * negativity(rho, subsystem)?).log2())
}

/// Smallest eigenvalue of the partial transpose.
pub fn min_pt_eigenvalue(rho: &DensityMatrix, subsystem: usize) -> Result<f64> {
    let pt = partial_transpose(rho, subsystem)?;
    Ok(herm_eigenvalues(&pt.entries)[0])
}

/// Squared concurrences of a pure three-qubit state, focused on qubit 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangleReport {
    pub c2_ab: f64,
    pub c2_ac: f64,
    pub c2_bc: f64,
    pub c2_a_bc: f64,
    pub tau_res: f64,
}

pub fn ckw(rho: &DensityMatrix) -> Result<TangleReport> {
    if rho.dims() != [2, 2, 2] {
        return Err(Error::Inapplicable(format!(
            "tangles need three qubits, got dims {:?}",
            rho.dims()
        )));
    }
    let p = purity(rho);
    if (p - 1.0).abs() > 1e-8 {
        return invalid(format!("residual tangle needs a pure state, purity {p}"));
    }
    let pair = |keep: [usize; 2]| -> Result<f64> { Ok(concurrence(&partial_trace(rho, &keep)?)?.powi(2)) };
    let c2_ab = pair([0, 1])?;
    let c2_ac = pair([0, 2])?;
    let c2_bc = pair([1, 2])?;
    let c2_a_bc = (4.0 * det(partial_trace(rho, &[0])?.entries()).re).max(0.0);
    Ok(TangleReport {
        c2_ab,
        c2_ac,
        c2_bc,
        c2_a_bc,
        tau_res: c2_a_bc - c2_ab - c2_ac,
    })
}

/// Pure-state vector of a rank-one density matrix, up to global phase.
pub fn dominant_vector(rho: &DensityMatrix) -> CVector {
    let (_, vecs) = herm_eigen(rho.entries());
    let v = vecs.column(vecs.ncols() - 1).into_owned();
    let k = (0..v.len())
        .max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()))
        .unwrap_or(0);
    let phase = v[k].conj() / cr(v[k].norm());
    v * phase
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn bell() -> CVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CVector::from_vec(vec![cr(s), cr(0.0), cr(0.0), cr(s)])
    }

    #[test]
    fn bell_values() {
        let psi = bell();
        assert!((entropy_of_entanglement(&psi, (2, 2)).unwrap() - 1.0).abs() < 1e-12);
        let rho = DensityMatrix::from_pure(&psi, vec![2, 2]).unwrap();
        assert!((concurrence(&rho).unwrap() - 1.0).abs() < 1e-10);
        assert!((negativity(&rho, 1).unwrap() - 0.5).abs() < 1e-12);
        assert!((log_negativity(&rho, 0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_is_unentangled() {
        let psi = CVector::from_vec(vec![cr(0.6), c(0.0, 0.8), cr(0.0), cr(0.0)]);
        let rho = DensityMatrix::from_pure(&psi, vec![2, 2]).unwrap();
        assert!(concurrence(&rho).unwrap() < 1e-7);
        assert!(negativity(&rho, 1).unwrap() < 1e-12);
        assert_eq!(schmidt(&psi, (2, 2)).unwrap().rank(), 1);
    }

    #[test]
    fn schmidt_reconstructs() {
        let psi = CVector::from_fn(12, |i, _| c((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()));
        let psi = &psi / cr(psi.norm());
        let s = schmidt(&psi, (3, 4)).unwrap();
        assert!((s.reconstruct() - &psi).norm() < 1e-8);
        let total: f64 = s.coefficients.iter().map(|x| x * x).sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn majorization_cases() {
        assert!(is_majorized_by(&[0.5, 0.5], &[1.0, 0.0]).unwrap());
        assert!(!is_majorized_by(&[1.0, 0.0], &[0.5, 0.5]).unwrap());
        let (a, b) = ([0.5, 0.4, 0.1], [0.6, 0.2, 0.2]);
        assert!(!is_majorized_by(&a, &b).unwrap());
        assert!(!is_majorized_by(&b, &a).unwrap());
        assert!(is_majorized_by(&[1.0 / 3.0; 3], &[0.9, 0.1]).unwrap());
    }

    #[test]
    fn ghz_and_w() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut ghz = CVector::zeros(8);
        ghz[0] = cr(s);
        ghz[7] = cr(s);
        let r = ckw(&DensityMatrix::from_pure(&ghz, vec![2, 2, 2]).unwrap()).unwrap();
        assert!((r.tau_res - 1.0).abs() < 1e-12);
        let t = 1.0 / 3f64.sqrt();
        let mut w = CVector::zeros(8);
        for k in [1, 2, 4] {
            w[k] = cr(t);
        }
        let r = ckw(&DensityMatrix::from_pure(&w, vec![2, 2, 2]).unwrap()).unwrap();
        assert!(r.tau_res.abs() < 1e-12);
        assert!((r.c2_ab - 4.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn concurrence_needs_qubits() {
        let rho = DensityMatrix::new(CMatrix::identity(6, 6) / cr(6.0), vec![2, 3]).unwrap();
        assert!(matches!(concurrence(&rho), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn collapsed_side_has_zero_concurrence() {
        let psi = CVector::from_vec(vec![cr(0.6), cr(0.8)]);
        let rho = DensityMatrix::from_pure(&psi, vec![2, 1]).unwrap();
        assert_eq!(concurrence(&rho).unwrap(), 0.0);
    }
}
