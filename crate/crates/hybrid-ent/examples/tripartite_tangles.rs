use hybrid_ent::catalog::{ghz, tripartite_qmm, w_state};
use hybrid_ent::linalg::cr;
use hybrid_ent::measures::ckw;

fn main() -> hybrid_ent::Result<()> {
    println!("GHZ {:?}", ckw(&ghz().density()?)?);
    println!("W   {:?}", ckw(&w_state().density()?)?);
    println!(
        "{:>6} {:>6} {:>8} {:>8} {:>8}",
        "Qphi", "Qpsi", "C2(A|B)", "C2(A|C)", "tau"
    );
    for qp in [0.0, 0.5, 0.9] {
        for qs in [0.0, 0.5, 0.9] {
            let r = ckw(&tripartite_qmm(cr(qp), cr(qs))?.density()?)?;
            println!(
                "{qp:>6.1} {qs:>6.1} {:>8.4} {:>8.4} {:>8.4}",
                r.c2_ab, r.c2_ac, r.tau_res
            );
        }
    }
    Ok(())
}
