//! Multi-subsystem state algebra.
//!
//! A [`DensityMatrix`] always carries its subsystem dimensions; partial
//! trace and partial transpose address subsystems by index in that list,
//! first subsystem most significant in the flat index.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fock::Operator;
use crate::linalg::{herm_eigenvalues, hermitian_defect, join_index, split_index, CMatrix, CVector};

/// Hermiticity tolerance, entrywise.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace tolerance.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-EIG_CLIP, 0)` count as zero; lower values are rejected.
pub const EIG_CLIP: f64 = 1e-10;

/// Hermitian, positive semidefinite, unit-trace matrix with subsystem structure.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validated constructor.
    pub fn new(entries: CMatrix, dims: Vec<usize>) -> Result<Self> {
        check_shape(&entries, &dims)?;
        let scale = entries.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let defect = hermitian_defect(&entries);
        if defect > HERMITIAN_TOL * scale {
            return invalid(format!("matrix not Hermitian (defect {defect:e})"));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return invalid(format!("trace {tr} differs from 1"));
        }
        let min = herm_eigenvalues(&entries).first().copied().unwrap_or(0.0);
        if min < -EIG_CLIP {
            return invalid(format!("negative eigenvalue {min:e}"));
        }
        Ok(DensityMatrix { entries, dims })
    }

    /// Projector onto a normalized state vector.
    pub fn from_pure(psi: &CVector, dims: Vec<usize>) -> Result<Self> {
        let n = psi.norm_squared();
        if (n - 1.0).abs() > TRACE_TOL {
            return invalid(format!("state norm² {n} differs from 1"));
        }
        let entries = psi * psi.adjoint();
        check_shape(&entries, &dims)?;
        Ok(DensityMatrix { entries, dims })
    }

    /// Convex mixture `Σ p_k |ψ_k⟩⟨ψ_k|` of normalized vectors.
    pub fn from_mixture(parts: &[(f64, CVector)], dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        let mut entries = CMatrix::zeros(total, total);
        let mut psum = 0.0;
        for (p, psi) in parts {
            if *p < 0.0 {
                return invalid("mixture weights must be nonnegative");
            }
            if psi.len() != total {
                return invalid("mixture component has wrong dimension");
            }
            let n = psi.norm_squared();
            if (n - 1.0).abs() > TRACE_TOL {
                return invalid(format!("mixture component norm² {n} differs from 1"));
            }
            entries += psi * psi.adjoint() * Complex64::new(*p, 0.0);
            psum += p;
        }
        if (psum - 1.0).abs() > TRACE_TOL {
            return invalid(format!("mixture weights sum to {psum}"));
        }
        Ok(DensityMatrix { entries, dims })
    }

    /// Skip validation for matrices that are positive by construction
    /// (Kraus outputs, compressed mixtures). Shape is still checked.
    pub(crate) fn trusted(entries: CMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(entries.nrows(), dims.iter().product::<usize>());
        DensityMatrix { entries, dims }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// Eigenvalues ascending with tiny negatives clipped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        herm_eigenvalues(&self.entries)
            .into_iter()
            .map(|l| if (-EIG_CLIP..0.0).contains(&l) { 0.0 } else { l })
            .collect()
    }

    /// Same matrix with relabelled subsystem dimensions.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        check_shape(&self.entries, &dims)?;
        Ok(DensityMatrix {
            entries: self.entries.clone(),
            dims,
        })
    }
}

fn check_shape(m: &CMatrix, dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if m.nrows() != m.ncols() || m.nrows() != total || dims.is_empty() {
        return invalid(format!(
            "matrix {}x{} does not match subsystem dims {:?}",
            m.nrows(),
            m.ncols(),
            dims
        ));
    }
    Ok(())
}

/// Kronecker product, concatenating any subsystem structure.
pub trait Tensor {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for DensityMatrix {
    fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix {
            entries: self.entries.kronecker(&other.entries),
            dims,
        }
    }
}

impl Tensor for Operator {
    fn tensor(&self, other: &Self) -> Self {
        Operator {
            entries: self.entries.kronecker(&other.entries),
            hermitian: self.hermitian && other.hermitian,
        }
    }
}

impl Tensor for CVector {
    fn tensor(&self, other: &Self) -> Self {
        crate::linalg::kron_vec(self, other)
    }
}

/// Reduced density matrix on the subsystems listed in `keep` (kept in ascending order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if keep.is_empty() {
        return invalid("partial trace must keep at least one subsystem");
    }
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidArgument(format!(
            "subsystem index out of range for dims {dims:?}"
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kdims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let tdims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let kd: usize = kdims.iter().product();
    let td: usize = tdims.iter().product();
    let m = rho.entries();
    let mut out = CMatrix::zeros(kd, kd);
    let mut digits = vec![0usize; dims.len()];
    let flat = |kdig: &[usize], tdig: &[usize], digits: &mut Vec<usize>| {
        for (pos, &k) in keep.iter().enumerate() {
            digits[k] = kdig[pos];
        }
        for (pos, &t) in traced.iter().enumerate() {
            digits[t] = tdig[pos];
        }
        join_index(digits, dims)
    };
    for i in 0..kd {
        let idig = split_index(i, &kdims);
        for j in 0..kd {
            let jdig = split_index(j, &kdims);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..td {
                let tdig = split_index(t, &tdims);
                let r = flat(&idig, &tdig, &mut digits);
                let s = flat(&jdig, &tdig, &mut digits);
                acc += m[(r, s)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityMatrix::trusted(out, kdims))
}

/// Partial transpose on one subsystem. The result is Hermitian but need not be positive.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<Operator> {
    let dims = rho.dims();
    if subsystem >= dims.len() {
        return invalid(format!("subsystem {subsystem} out of range for dims {dims:?}"));
    }
    let m = rho.entries();
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for r in 0..n {
        let mut rd = split_index(r, dims);
        for s in 0..n {
            let mut sd = split_index(s, dims);
            std::mem::swap(&mut rd[subsystem], &mut sd[subsystem]);
            let r2 = join_index(&rd, dims);
            let s2 = join_index(&sd, dims);
            std::mem::swap(&mut rd[subsystem], &mut sd[subsystem]);
            out[(r2, s2)] = m[(r, s)];
        }
    }
    Ok(Operator::hermitian(out))
}

/// `tr ρ²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let m = rho.entries();
    m.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cr};

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = CVector::from_vec(vec![cr(s), cr(0.0), cr(0.0), cr(s)]);
        DensityMatrix::from_pure(&psi, vec![2, 2]).unwrap()
    }

    #[test]
    fn bell_reductions() {
        let rho = bell();
        for keep in [0, 1] {
            let red = partial_trace(&rho, &[keep]).unwrap();
            assert!((red.entries() - CMatrix::identity(2, 2) * cr(0.5)).norm() < 1e-15);
        }
        let pt = partial_transpose(&rho, 1).unwrap();
        let ev = herm_eigenvalues(&pt.entries);
        assert!((ev[0] + 0.5).abs() < 1e-12);
        let back = partial_transpose(&DensityMatrix::trusted(pt.entries.clone(), vec![2, 2]), 1).unwrap();
        assert!((back.entries - rho.entries()).norm() < 1e-15);
    }

    #[test]
    fn sigma_y_tensor_traceless() {
        let sy = Operator::new(CMatrix::from_row_slice(
            2,
            2,
            &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)],
        ));
        assert!(sy.tensor(&sy).entries.trace().norm() < 1e-15);
        let id = Operator::identity(2);
        assert_eq!(id.tensor(&Operator::identity(3)).entries, CMatrix::identity(6, 6));
    }

    #[test]
    fn ghz_reduction_is_classical() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = CVector::zeros(8);
        psi[0] = cr(s);
        psi[7] = cr(s);
        let rho = DensityMatrix::from_pure(&psi, vec![2, 2, 2]).unwrap();
        let red = partial_trace(&rho, &[0, 1]).unwrap();
        let mut want = CMatrix::zeros(4, 4);
        want[(0, 0)] = cr(0.5);
        want[(3, 3)] = cr(0.5);
        assert!((red.entries() - want).norm() < 1e-15);
    }

    #[test]
    fn purity_values() {
        assert!((purity(&bell()) - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::new(CMatrix::identity(2, 2) * cr(0.5), vec![2]).unwrap();
        assert!((purity(&mixed) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let mut m = CMatrix::identity(2, 2) * cr(0.5);
        m[(0, 1)] = cr(0.1);
        assert!(DensityMatrix::new(m, vec![2]).is_err());
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(1.5), cr(-0.5)]));
        assert!(DensityMatrix::new(m, vec![2]).is_err());
        assert!(DensityMatrix::new(CMatrix::identity(3, 3) / cr(3.0), vec![2]).is_err());
        let rho = bell();
        assert!(partial_trace(&rho, &[2]).is_err());
        assert!(partial_transpose(&rho, 5).is_err());
    }
}
