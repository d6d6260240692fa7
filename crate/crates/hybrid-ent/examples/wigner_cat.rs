use std::f64::consts::PI;

use hybrid_ent::catalog::{jcm_generate, project_to_cat};
use hybrid_ent::fock::{linspace, wigner};

fn main() -> hybrid_ent::Result<()> {
    let alpha = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2.0);
    let generated = jcm_generate(alpha, PI / 6.0)?;
    for sign in [1.0, -1.0] {
        let cat = project_to_cat(&generated, sign)?;
        let h = cat.hybrid().expect("hybrid payload");
        let rho = h.fock_density(&[h.default_cutoffs()[0]])?;
        let half = (alpha * 2f64.sqrt() + 4.0).ceil();
        let grid = linspace(-half, half, 121);
        let w = wigner(&rho, &grid, &grid)?;
        println!(
            "sign {sign:+}: probability {:.4}, integral {:.6}, min W {:.4}",
            cat.param("probability").unwrap_or(f64::NAN),
            w.integral,
            w.values.min()
        );
    }
    Ok(())
}
