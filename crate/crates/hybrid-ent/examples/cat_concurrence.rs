//! Concurrence of the two-mode cat state across its relative phase.

use std::f64::consts::PI;

use hybrid_ent::catalog::two_mode_cat;
use hybrid_ent::measures::concurrence;

fn main() -> hybrid_ent::Result<()> {
    println!("{:>6} {:>8} {:>12}", "alpha", "phi/pi", "C");
    for alpha in [0.25, 0.5, 1.0] {
        for k in 0..=4 {
            let phi = k as f64 * PI / 4.0;
            let rho = two_mode_cat(alpha, phi)?.density()?;
            println!("{alpha:>6.2} {:>8.2} {:>12.6}", phi / PI, concurrence(&rho)?);
        }
    }
    Ok(())
}
