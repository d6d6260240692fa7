//! Two-mode squeezed vacuum in the covariance picture, checked against a
//! Fock-space construction.

use hybrid_ent::gaussian::{
    gaussian_entropy, gaussian_log_negativity, symplectic_eigenvalues, two_mode_squeezed_fock, GaussianState,
};
use hybrid_ent::measures::schmidt;

fn main() -> hybrid_ent::Result<()> {
    for r in [0.2, 0.5, 1.0] {
        let g = GaussianState::two_mode_squeezed(r);
        let mu = symplectic_eigenvalues(g.covariance())?;
        let en = gaussian_log_negativity(g.covariance(), &[1])?;
        let es = gaussian_entropy(g.covariance(), &[0])?;
        let n_cut = 30;
        let sd = schmidt(&two_mode_squeezed_fock(r, n_cut)?, (n_cut + 1, n_cut + 1))?;
        let en_fock = 2.0 * sd.coefficients.iter().sum::<f64>().log2();
        println!("r {r}: spectrum {mu:.3?}  E_N {en:.6} (Fock {en_fock:.6})  E_S {es:.6}");
    }
    Ok(())
}
