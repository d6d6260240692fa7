use hybrid_ent::composite::DensityMatrix;
use hybrid_ent::compression::{compress, gram_matrix, inverse_gram_schmidt, Branch, Factor, HybridState, Slot, Term};
use hybrid_ent::gaussian::{
    embed, gaussian_log_negativity, phase_rotation, squeezer, symplectic_defect, GaussianState,
};
use hybrid_ent::kets::SymbolicKet;
use hybrid_ent::linalg::{c, cr, CVector};
use hybrid_ent::measures::{concurrence, log_negativity, min_pt_eigenvalue, negativity};
use hybrid_ent::witness::{sv_moment_matrix, HybridMoments};
use proptest::prelude::*;

fn amp() -> impl Strategy<Value = (f64, f64)> {
    (-1.5..1.5f64, -1.5..1.5f64)
}

fn unit_vector(d: usize) -> impl Strategy<Value = CVector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), d)
        .prop_filter("non-zero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| {
            let v = CVector::from_iterator(v.len(), v.into_iter().map(|(a, b)| c(a, b)));
            let n = v.norm();
            v / cr(n)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_hybrid_states_pass_every_moment_test(
        t in 0.0..std::f64::consts::PI,
        ph in 0.0..std::f64::consts::TAU,
        beta in amp(),
        p in 0.05..0.95f64,
        gamma in amp(),
    ) {
        let local = |prob: f64, b: (f64, f64), flip: bool| {
            let ket = || Factor::Ket(SymbolicKet::Coherent(c(b.0, b.1)));
            let (x, y) = if flip { (1, 0) } else { (0, 1) };
            Term::new(prob, vec![
                Branch::new(cr((t / 2.0).cos()), vec![Factor::Level(x), ket()]),
                Branch::new(c(0.0, ph).exp() * (t / 2.0).sin(), vec![Factor::Level(y), ket()]),
            ])
        };
        let h = HybridState::new(vec![Slot::Qudit(2), Slot::Qumode], vec![local(p, beta, false), local(1.0 - p, gamma, true)]).unwrap();
        let m = sv_moment_matrix(&HybridMoments::qudit_qumode(&h).unwrap(), 2).unwrap();
        let scale = m.entries.iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(m.min_eigenvalue() / scale > -1e-10);
        prop_assert!(negativity(&compress(&h).unwrap(), 1).unwrap() < 1e-10);
    }

    #[test]
    fn negativity_vanishes_exactly_when_partial_transpose_is_positive(
        a in unit_vector(6),
        b in unit_vector(6),
        w in 0.0..1.0f64,
    ) {
        let rho = DensityMatrix::from_mixture(&[(w, a), (1.0 - w, b)], vec![2, 3]).unwrap();
        let n = negativity(&rho, 1).unwrap();
        let low = min_pt_eigenvalue(&rho, 1).unwrap();
        prop_assert_eq!(n <= 1e-10, low >= -1e-10);
        prop_assert!((log_negativity(&rho, 1).unwrap() - (1.0 + 2.0 * n).log2()).abs() < 1e-12);
    }

    #[test]
    fn concurrence_is_a_local_unitary_invariant(psi in unit_vector(4), theta in 0.0..6.3f64) {
        let rho = DensityMatrix::from_pure(&psi, vec![2, 2]).unwrap();
        let (s, co) = theta.sin_cos();
        let u = hybrid_ent::linalg::CMatrix::from_row_slice(2, 2, &[cr(co), cr(-s), c(0.0, s), c(0.0, co)]);
        let id = hybrid_ent::linalg::CMatrix::identity(2, 2);
        let rotated = DensityMatrix::from_pure(&(u.kronecker(&id) * &psi), vec![2, 2]).unwrap();
        let (c0, c1) = (concurrence(&rho).unwrap(), concurrence(&rotated).unwrap());
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c0));
        prop_assert!((c0 - c1).abs() < 1e-10);
    }

    #[test]
    fn gram_coefficients_reproduce_overlaps(kets in prop::collection::vec(amp(), 1..=6)) {
        let kets: Vec<SymbolicKet> = kets.into_iter().map(|(a, b)| SymbolicKet::Coherent(c(a, b))).collect();
        let g = gram_matrix(&kets);
        let gs = inverse_gram_schmidt(&g).unwrap();
        let dev = (&gs.a * gs.a.adjoint() - &g).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-10);
        prop_assert!(gs.basis_size <= kets.len());
    }

    #[test]
    fn local_symplectics_leave_log_negativity_unchanged(r in 0.0..1.2f64, s0 in -0.8..0.8f64, phi in 0.0..6.3f64) {
        let g = GaussianState::two_mode_squeezed(r);
        let local = embed(&squeezer(s0), &[0], 2).unwrap() * embed(&phase_rotation(phi), &[1], 2).unwrap();
        prop_assert!(symplectic_defect(&local) < 1e-12);
        let moved = g.transformed(&local);
        let before = gaussian_log_negativity(g.covariance(), &[1]).unwrap();
        let after = gaussian_log_negativity(moved.covariance(), &[1]).unwrap();
        prop_assert!((before - after).abs() < 1e-9);
    }
}
