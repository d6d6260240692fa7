//! Exact single-mode ket descriptors with analytic overlaps.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{coherent_amplitudes, default_cutoff, overlap_coherent};
use crate::linalg::{binomial, cpowi, cr, factorial, CVector, I};

/// A single-mode pure state described by a few parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymbolicKet {
    /// `|α⟩`
    Coherent(Complex64),
    /// `D(α) S(ξ)|0⟩` with `ξ = r e^{iθ}` and `S(ξ) = exp(½(ξ* a² − ξ a†²))`.
    DisplacedSqueezed { alpha: Complex64, r: f64, theta: f64 },
    /// `a†^k |α⟩`, normalized.
    PhotonAddedCoherent { k: usize, alpha: Complex64 },
    /// `|n⟩`
    Fock(usize),
}

impl std::fmt::Display for SymbolicKet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let z = |c: &Complex64| format!("{}{:+}i", c.re, c.im);
        match self {
            SymbolicKet::Coherent(a) => write!(f, "coherent({})", z(a)),
            SymbolicKet::DisplacedSqueezed { alpha, r, theta } => {
                write!(f, "squeezed(alpha={}, r={r}, theta={theta})", z(alpha))
            }
            SymbolicKet::PhotonAddedCoherent { k, alpha } => write!(f, "photon_added(k={k}, alpha={})", z(alpha)),
            SymbolicKet::Fock(n) => write!(f, "fock({n})"),
        }
    }
}

impl SymbolicKet {
    pub fn coherent(alpha: impl Into<Complex64>) -> Self {
        SymbolicKet::Coherent(alpha.into())
    }

    /// `S(ξ)|α⟩`, rewritten as `D(β) S(ξ)|0⟩` with `β = α cosh r − α* e^{iθ} sinh r`.
    pub fn squeezed_coherent(alpha: Complex64, r: f64, theta: f64) -> Self {
        let beta = alpha * r.cosh() - alpha.conj() * (I * theta).exp() * r.sinh();
        SymbolicKet::DisplacedSqueezed { alpha: beta, r, theta }
    }

    /// Mean photon number, used to size truncations.
    pub fn mean_photons(&self) -> f64 {
        match *self {
            SymbolicKet::Coherent(a) => a.norm_sqr(),
            SymbolicKet::DisplacedSqueezed { alpha, r, .. } => alpha.norm_sqr() + r.sinh().powi(2),
            SymbolicKet::PhotonAddedCoherent { k, alpha } => alpha.norm_sqr() + 2.0 * k as f64 + 1.0,
            SymbolicKet::Fock(n) => n as f64,
        }
    }

    /// Coherent amplitude scaled by `s`; only defined for coherent kets.
    pub fn scale_amplitude(&self, s: f64) -> Result<SymbolicKet> {
        match *self {
            SymbolicKet::Coherent(a) => Ok(SymbolicKet::Coherent(a * s)),
            other => Err(Error::UnsupportedKet(format!("{other:?} is not coherent"))),
        }
    }

    pub fn coherent_amplitude(&self) -> Option<Complex64> {
        match *self {
            SymbolicKet::Coherent(a) => Some(a),
            _ => None,
        }
    }

    /// Fock amplitudes `⟨n|ψ⟩` for `n = 0..=n_cut`.
    pub fn fock_amplitudes(&self, n_cut: usize) -> CVector {
        match *self {
            SymbolicKet::Coherent(a) => coherent_amplitudes(a, n_cut),
            SymbolicKet::Fock(n) => {
                let mut v = CVector::zeros(n_cut + 1);
                if n <= n_cut {
                    v[n] = cr(1.0);
                }
                v
            }
            SymbolicKet::PhotonAddedCoherent { k, alpha } => {
                let base = coherent_amplitudes(alpha, n_cut);
                let norm = photon_added_norm(k, alpha).sqrt();
                let mut v = CVector::zeros(n_cut + 1);
                for n in k..=n_cut {
                    let ratio: f64 = ((n - k + 1)..=n).map(|j| j as f64).product();
                    v[n] = base[n - k] * ratio.sqrt() / norm;
                }
                v
            }
            SymbolicKet::DisplacedSqueezed { alpha, r, theta } => {
                let g = Gaussian::displaced_squeezed(alpha, r, theta);
                let c0 = Gaussian::vacuum().overlap(&g);
                let (ch, sh) = (r.cosh(), r.sinh());
                let e = (I * theta).exp();
                let gamma = alpha * ch + alpha.conj() * e * sh;
                let mut v = CVector::zeros(n_cut + 1);
                v[0] = c0;
                if n_cut >= 1 {
                    v[1] = gamma * c0 / ch;
                }
                for n in 1..n_cut {
                    let nf = n as f64;
                    v[n + 1] = (gamma * v[n] - e * sh * nf.sqrt() * v[n - 1]) / (ch * (nf + 1.0).sqrt());
                }
                v
            }
        }
    }

    /// Smallest cutoff whose last ten amplitudes carry less than `1e-14` weight.
    pub fn auto_cutoff(&self) -> usize {
        let mut n = default_cutoff(self.mean_photons());
        if let SymbolicKet::DisplacedSqueezed { r, .. } = *self {
            let t = r.abs().tanh();
            if t > 0.0 {
                n = n.max((34.0 / -t.ln()).ceil() as usize + 10);
            }
        }
        loop {
            let v = self.fock_amplitudes(n);
            let tail: f64 = v.iter().skip(n.saturating_sub(10)).map(|z| z.norm_sqr()).sum();
            if tail < 1e-14 || n > 4000 {
                return n;
            }
            n = n * 3 / 2 + 1;
        }
    }
}

/// `⟨bra|ket⟩`, analytic wherever a closed form is available.
///
/// Photon-added against squeezed kets has no closed form here and falls
/// back to a Fock sum with a cutoff that converges both series.
pub fn braket(bra: &SymbolicKet, ket: &SymbolicKet) -> Complex64 {
    use SymbolicKet::*;
    match (bra, ket) {
        (Coherent(b), Coherent(a)) => overlap_coherent(*a, *b),
        (Fock(n), other) => other.fock_amplitudes(*n)[*n],
        (other, Fock(n)) => other.fock_amplitudes(*n)[*n].conj(),
        (Coherent(b), PhotonAddedCoherent { k, alpha }) => photon_added_braket(0, *b, *k, *alpha),
        (PhotonAddedCoherent { k, alpha: b }, Coherent(a)) => photon_added_braket(*k, *b, 0, *a),
        (PhotonAddedCoherent { k: l, alpha: b }, PhotonAddedCoherent { k, alpha: a }) => {
            photon_added_braket(*l, *b, *k, *a)
        }
        (Coherent(_) | DisplacedSqueezed { .. }, Coherent(_) | DisplacedSqueezed { .. }) => {
            Gaussian::of(bra).overlap(&Gaussian::of(ket))
        }
        _ => {
            let n = bra.auto_cutoff().max(ket.auto_cutoff());
            ket.fock_amplitudes(n).dot(&bra.fock_amplitudes(n).conjugate())
        }
    }
}

/// `⟨α|a^k a†^k|α⟩ = Σ_j C(k,j)² j! |α|^{2(k−j)}`.
fn photon_added_norm(k: usize, alpha: Complex64) -> f64 {
    (0..=k)
        .map(|j| binomial(k, j).powi(2) * factorial(j) * alpha.norm_sqr().powi((k - j) as i32))
        .sum()
}

/// Normalized `⟨β|a^l a†^k|α⟩`, with `a^l a†^k` normal ordered.
fn photon_added_braket(l: usize, beta: Complex64, k: usize, alpha: Complex64) -> Complex64 {
    let mut sum = cr(0.0);
    for j in 0..=k.min(l) {
        sum += cpowi(beta.conj(), k - j) * cpowi(alpha, l - j) * binomial(l, j) * binomial(k, j) * factorial(j);
    }
    overlap_coherent(alpha, beta) * sum / (photon_added_norm(l, beta) * photon_added_norm(k, alpha)).sqrt()
}

/// Wavefunction `exp(−a x² + b x + c)`.
#[derive(Debug, Clone, Copy)]
struct Gaussian {
    a: Complex64,
    b: Complex64,
    c: Complex64,
}

impl Gaussian {
    fn vacuum() -> Self {
        Gaussian::displaced_squeezed(cr(0.0), 0.0, 0.0)
    }

    fn of(k: &SymbolicKet) -> Self {
        match *k {
            SymbolicKet::Coherent(a) => Gaussian::displaced_squeezed(a, 0.0, 0.0),
            SymbolicKet::DisplacedSqueezed { alpha, r, theta } => Gaussian::displaced_squeezed(alpha, r, theta),
            _ => unreachable!("only Gaussian kets have a Gaussian wavefunction"),
        }
    }

    fn displaced_squeezed(alpha: Complex64, r: f64, theta: f64) -> Self {
        let e = (I * theta).exp();
        let a = (r.cosh() + e * r.sinh()) / (r.cosh() - e * r.sinh()) * 0.5;
        // normalization fixes Re c; phase makes ⟨0|S(ξ)|0⟩ real positive
        let re_c = -0.25 * (std::f64::consts::PI / (2.0 * a.re)).ln();
        let vac_overlap_root = (cr(std::f64::consts::PI) / (a + 0.5)).sqrt();
        let c = Complex64::new(re_c, -vac_overlap_root.arg());
        let x0 = std::f64::consts::SQRT_2 * alpha.re;
        let p0 = std::f64::consts::SQRT_2 * alpha.im;
        Gaussian {
            a,
            b: a * 2.0 * x0 + I * p0,
            c: c - a * x0 * x0 - I * (0.5 * x0 * p0),
        }
    }

    /// `⟨self|other⟩ = ∫ conj(ψ_self) ψ_other dx`.
    fn overlap(&self, other: &Gaussian) -> Complex64 {
        let a = self.a.conj() + other.a;
        let b = self.b.conj() + other.b;
        (cr(std::f64::consts::PI) / a).sqrt() * (b * b / (a * 4.0) + self.c.conj() + other.c).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{linear_optics_unitary, LinearOptic};
    use crate::linalg::c;

    #[test]
    fn gaussian_matches_coherent_overlap() {
        let a = c(0.4, -0.3);
        let b = c(-0.2, 0.9);
        let via_gauss = Gaussian::of(&SymbolicKet::Coherent(b)).overlap(&Gaussian::of(&SymbolicKet::Coherent(a)));
        assert!((via_gauss - overlap_coherent(a, b)).norm() < 1e-14);
    }

    #[test]
    fn self_overlaps_are_one() {
        let kets = [
            SymbolicKet::Coherent(c(0.5, 0.5)),
            SymbolicKet::DisplacedSqueezed {
                alpha: c(0.3, -0.2),
                r: 0.6,
                theta: 0.7,
            },
            SymbolicKet::PhotonAddedCoherent {
                k: 2,
                alpha: c(0.8, 0.1),
            },
            SymbolicKet::Fock(3),
        ];
        for k in &kets {
            assert!((braket(k, k) - cr(1.0)).norm() < 1e-12, "{k:?}");
        }
    }

    #[test]
    fn squeezed_amplitudes_match_unitaries() {
        let (alpha, r, theta) = (c(0.5, 0.2), 0.4, 0.9);
        let n = 40;
        let s = linear_optics_unitary(LinearOptic::Squeeze { theta, r }, n).unwrap();
        let d = linear_optics_unitary(LinearOptic::Displace(alpha), n).unwrap();
        let numeric = (&d.entries * &s.entries).column(0).into_owned();
        let ket = SymbolicKet::DisplacedSqueezed { alpha, r, theta };
        let analytic = ket.fock_amplitudes(n);
        assert!((numeric.rows(0, 20) - analytic.rows(0, 20)).norm() < 1e-9);
        // S(ξ)|α⟩ rewriting
        let sc = SymbolicKet::squeezed_coherent(alpha, r, theta);
        let numeric = (&s.entries * coherent_amplitudes(alpha, n)).into_owned();
        assert!((numeric.rows(0, 20) - sc.fock_amplitudes(n).rows(0, 20)).norm() < 1e-9);
    }

    #[test]
    fn analytic_overlaps_match_fock_sums() {
        let kets = [
            SymbolicKet::Coherent(c(0.5, 0.5)),
            SymbolicKet::Coherent(c(-0.7, 0.1)),
            SymbolicKet::DisplacedSqueezed {
                alpha: c(0.3, -0.2),
                r: 0.6,
                theta: 0.7,
            },
            SymbolicKet::DisplacedSqueezed {
                alpha: c(-0.1, 0.4),
                r: 0.3,
                theta: -1.1,
            },
            SymbolicKet::PhotonAddedCoherent {
                k: 2,
                alpha: c(0.8, 0.1),
            },
            SymbolicKet::PhotonAddedCoherent {
                k: 1,
                alpha: c(-0.3, 0.6),
            },
            SymbolicKet::Fock(3),
        ];
        let n = 80;
        for x in &kets {
            for y in &kets {
                let fock = y.fock_amplitudes(n).dot(&x.fock_amplitudes(n).conjugate());
                assert!((braket(x, y) - fock).norm() < 1e-10, "{x:?} {y:?}");
            }
        }
    }
}
