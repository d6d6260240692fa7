use hybrid_ent::catalog::thermal;
use hybrid_ent::catalog::Payload;
use hybrid_ent::witness::{determinant, optimal_alpha, thermal_s1, thermal_threshold, ThermalMoments, S1_ROWS};

fn main() -> hybrid_ent::Result<()> {
    let eta = 2.0 / 3.0;
    for n_th in [0.0, 0.05, 0.2] {
        let st = thermal(0.5, eta, n_th)?;
        let Payload::Thermal(out) = &st.payload else {
            unreachable!()
        };
        let from_moments = determinant(&ThermalMoments::new(out), &S1_ROWS)?;
        println!(
            "n_th {n_th:<5} s1 moments {from_moments:+.6e}  closed {:+.6e}",
            thermal_s1(0.5, eta, n_th)
        );
    }
    let best = optimal_alpha();
    println!(
        "largest tolerable noise at eta = {eta:.3}: n_th < {:.5} (alpha = {best:.4})",
        thermal_threshold(best, eta)
    );
    Ok(())
}
