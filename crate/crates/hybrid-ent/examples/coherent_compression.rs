use hybrid_ent::catalog::qutrit_qumode;
use hybrid_ent::compression::{classify, compression, gram_matrix, inverse_gram_schmidt};
use hybrid_ent::kets::SymbolicKet;
use hybrid_ent::linalg::c;
use hybrid_ent::measures::schmidt;

fn main() -> hybrid_ent::Result<()> {
    // three coherent kets on a circle: lower-triangular coefficients reproduce the overlaps
    let kets: Vec<SymbolicKet> = (0..3)
        .map(|k| SymbolicKet::Coherent(c(0.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0).exp()))
        .collect();
    let g = gram_matrix(&kets);
    let gs = inverse_gram_schmidt(&g)?;
    println!("basis size {}", gs.basis_size);
    println!("{:.4}", gs.a);

    let st = qutrit_qumode((2.0 * 2f64.ln()).sqrt())?;
    let comp = compression(st.hybrid().expect("hybrid payload"))?;
    println!("qutrit-qumode: {}, effective dims {:?}", classify(&st), comp.dims());
    let sd = schmidt(&comp.components[0].1, (comp.dims()[0], comp.dims()[1]))?;
    println!("Schmidt coefficients {:.4?}", sd.coefficients);
    Ok(())
}
