//! Moment-matrix determinants evaluated from generic moments and compared
//! with the closed forms.

use hybrid_ent::catalog::{he_state, two_mode_cat};
use hybrid_ent::witness::{cat_witness_determinants, determinant, verdict, HybridMoments, QuditOps, S1_ROWS, S2_ROWS};

fn main() -> hybrid_ent::Result<()> {
    for alpha in [0.3, 0.8, 1.5] {
        let st = he_state(alpha, 0.0)?;
        let h = st.hybrid().expect("hybrid payload");
        for ops in [QuditOps::Adapted, QuditOps::Embedded] {
            let p = HybridMoments::qudit_qumode(h)?.with_qudit_ops(ops);
            let s1 = determinant(&p, &S1_ROWS)?;
            println!(
                "qubit-qumode alpha {alpha}: {ops:?} s1 = {s1:+.6e} -> {:?}",
                verdict(s1)
            );
        }
    }

    for phi in [0.0, 1.0, 2.0, 3.0] {
        let st = two_mode_cat(1.0, phi)?;
        let p = HybridMoments::new(st.hybrid().expect("hybrid payload"), 0, 1)?;
        let closed = cat_witness_determinants(1.0.into(), phi);
        println!(
            "cat phi {phi}: s1 {:+.6e} (closed {:+.6e}), s2 {:+.6e} (closed {:+.6e}), selected {:+.3e}",
            determinant(&p, &S1_ROWS)?,
            closed.s1,
            determinant(&p, &S2_ROWS)?,
            closed.s2,
            closed.selected
        );
    }
    Ok(())
}
