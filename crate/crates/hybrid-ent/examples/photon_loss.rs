//! Photon loss on `(|0⟩|α⟩ + |1⟩|−α⟩)/√2` and the qubit evolution
//! equation for concurrence.

use hybrid_ent::catalog::damped;
use hybrid_ent::channels::{concurrence_evolution_check, damped_concurrence, qubit_loss_kraus};
use hybrid_ent::linalg::{cr, CVector};
use hybrid_ent::measures::concurrence;

fn main() -> hybrid_ent::Result<()> {
    for eta in [1.0, 0.9, 0.6, 0.3] {
        let row: Vec<String> = [0.4, 0.8, 1.2]
            .iter()
            .map(|&a| {
                let c = concurrence(&damped(a, eta)?.density()?)?;
                Ok(format!("{c:.4} ({:.4})", damped_concurrence(a, eta)))
            })
            .collect::<hybrid_ent::Result<_>>()?;
        println!("eta {eta:.1}: {}", row.join("  "));
    }

    let w: f64 = 0.25;
    let chi = CVector::from_vec(vec![cr(w.sqrt()), cr(0.0), cr(0.0), cr((1.0 - w).sqrt())]);
    let r = concurrence_evolution_check(&chi, &qubit_loss_kraus(0.5)?)?;
    println!(
        "concurrence: out {:.6} product {:.6}",
        r.concurrence_out, r.concurrence_product
    );
    println!(
        "negativity:  out {:.6} product {:.6}",
        r.negativity_out, r.negativity_product
    );
    Ok(())
}
