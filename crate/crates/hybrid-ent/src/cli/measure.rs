//! Scalar quantities evaluated on a named state.

use crate::catalog::{NamedState, Payload};
use crate::composite::{purity, DensityMatrix};
use crate::compression::Slot;
use crate::error::{Error, Result};
use crate::fock::default_cutoff;
use crate::measures::{
    ckw, concurrence, dominant_vector, entropy_of_entanglement, log_negativity, min_pt_eigenvalue, negativity,
};
use crate::witness::{
    determinant, geometric_mixture_s1, swap_witness, DensityMoments, HybridMoments, QuditOps, ThermalMoments, S1_ROWS,
    S2_ROWS,
};

/// Names accepted by `measure` and `sweep`.
pub const MEASURES: &[&str] = &[
    "purity",
    "entropy",
    "concurrence",
    "negativity",
    "log-negativity",
    "min-pt-eigenvalue",
    "c2-ab",
    "c2-ac",
    "c2-bc",
    "c2-a-bc",
    "tau-res",
    "s1",
    "s2",
    "s1-bound",
    "swap",
    "fidelity",
];

/// Numerical settings shared by all evaluations of one command.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub cutoff: Option<usize>,
    pub qudit_ops: QuditOps,
}

impl Context {
    /// Fock cutoff used for a thermal output with the given parameters.
    pub fn thermal_cutoff(&self, alpha: f64, n_th: f64) -> usize {
        self.cutoff
            .unwrap_or_else(|| default_cutoff(alpha * alpha + 4.0 * n_th))
    }
}

fn inapplicable<T>(what: &str, state: &NamedState) -> Result<T> {
    Err(Error::Inapplicable(format!("{what} does not apply to {}", state.id)))
}

/// Density matrix used by the matrix-based measures.
pub fn density_for(state: &NamedState, ctx: &Context) -> Result<DensityMatrix> {
    match &state.payload {
        Payload::Thermal(t) => {
            let alpha = state.param("alpha").unwrap_or(1.0);
            t.kraus_density(ctx.thermal_cutoff(alpha, t.params.n_th))
        }
        _ => state.density(),
    }
}

fn bipartite(rho: &DensityMatrix, state: &NamedState, what: &str) -> Result<()> {
    if rho.dims().len() != 2 {
        return inapplicable(what, state);
    }
    Ok(())
}

fn sv(state: &NamedState, ctx: &Context, second: bool) -> Result<f64> {
    let rows = if second { &S2_ROWS } else { &S1_ROWS };
    match &state.payload {
        Payload::Hybrid(h) => {
            let p = match h.slots() {
                [Slot::Qumode, Slot::Qumode] => HybridMoments::new(h, 0, 1)?,
                [Slot::Qudit(_), Slot::Qumode] | [Slot::Qumode, Slot::Qudit(_)] => HybridMoments::qudit_qumode(h)?,
                _ => return inapplicable("a two-mode moment determinant", state),
            };
            determinant(&p.with_qudit_ops(ctx.qudit_ops), rows)
        }
        Payload::Thermal(t) => determinant(&ThermalMoments::new(t).with_qudit_ops(ctx.qudit_ops), rows),
        Payload::Geometric(g) if !second => Ok(geometric_mixture_s1(g.x, g.alpha)?.s1),
        Payload::Geometric(_) => inapplicable("s2", state),
        Payload::Density(_) | Payload::Pure { .. } => {
            let rho = state.density()?;
            bipartite(&rho, state, "a two-mode moment determinant")?;
            let p = DensityMoments::new(&rho, 1)?
                .with_qudit_ops(0, QuditOps::Adapted)
                .with_qudit_ops(1, QuditOps::Adapted);
            determinant(&p, rows)
        }
    }
}

pub fn evaluate(state: &NamedState, name: &str, ctx: &Context) -> Result<f64> {
    match name {
        "s1" => sv(state, ctx, false),
        "s2" => sv(state, ctx, true),
        "s1-bound" => match &state.payload {
            Payload::Geometric(g) => Ok(geometric_mixture_s1(g.x, g.alpha)?.s1_bound),
            _ => inapplicable("s1-bound", state),
        },
        "fidelity" => match state.id {
            "qubus" => Ok(state.param("fidelity").unwrap_or(f64::NAN)),
            _ => inapplicable("fidelity", state),
        },
        _ => {
            if !MEASURES.contains(&name) {
                return Err(Error::InvalidArgument(format!(
                    "unknown measure '{name}'; known: {}",
                    MEASURES.join(", ")
                )));
            }
            let rho = density_for(state, ctx)?;
            matrix_measure(state, &rho, name)
        }
    }
}

fn matrix_measure(state: &NamedState, rho: &DensityMatrix, name: &str) -> Result<f64> {
    match name {
        "purity" => Ok(purity(rho)),
        "entropy" => {
            bipartite(rho, state, "entropy of entanglement")?;
            if (purity(rho) - 1.0).abs() > 1e-8 {
                return inapplicable("entropy of entanglement (state is mixed)", state);
            }
            let d = rho.dims();
            entropy_of_entanglement(&dominant_vector(rho), (d[0], d[1]))
        }
        "concurrence" => concurrence(rho),
        "negativity" => {
            bipartite(rho, state, "negativity")?;
            negativity(rho, 1)
        }
        "log-negativity" => {
            bipartite(rho, state, "log-negativity")?;
            log_negativity(rho, 1)
        }
        "min-pt-eigenvalue" => {
            bipartite(rho, state, "partial transpose")?;
            min_pt_eigenvalue(rho, 1)
        }
        "c2-ab" | "c2-ac" | "c2-bc" | "c2-a-bc" | "tau-res" => {
            let r = ckw(rho)?;
            Ok(match name {
                "c2-ab" => r.c2_ab,
                "c2-ac" => r.c2_ac,
                "c2-bc" => r.c2_bc,
                "c2-a-bc" => r.c2_a_bc,
                _ => r.tau_res,
            })
        }
        "swap" => swap_witness(rho),
        other => Err(Error::InvalidArgument(format!("unknown measure '{other}'"))),
    }
}
