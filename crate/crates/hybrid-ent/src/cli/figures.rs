//! Data behind the published figures, one sweep per figure id.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::catalog::{damped, jcm_generate, mixed23, mixed24, project_to_cat, tripartite_qmm, two_mode_cat};
use crate::channels::{damped_concurrence, damped_concurrence_published};
use crate::error::{Error, Result};
use crate::fock::{linspace, wigner};
use crate::linalg::cr;
use crate::measures::{ckw, concurrence, log_negativity};
use crate::witness::{
    cat_witness_determinants, determinant, geometric_mixture_s1, mixed24_s1, squeezed_s1, thermal_s1,
    thermal_threshold, HybridMoments, S1_ROWS,
};

use super::sweep::{run_sweep, Axis, SweepResult};

pub const FIGURE_IDS: &[&str] = &[
    "cat-concurrence",
    "cat-dets",
    "squeezed-det",
    "damped-concurrence",
    "logneg-23",
    "det-24",
    "thermal-s1",
    "thermal-region",
    "arti-s1",
    "residual-ent",
    "wigner-cat",
];

/// Files and closed forms behind one figure.
#[derive(Debug)]
pub struct Figure {
    pub id: &'static str,
    pub closed_forms: Vec<&'static str>,
    pub sweeps: Vec<(String, SweepResult)>,
}

#[derive(Serialize)]
pub struct Manifest<'a> {
    pub figure: &'a str,
    pub files: Vec<&'a str>,
    pub closed_forms: &'a [&'static str],
}

impl Figure {
    pub fn manifest(&self) -> Manifest<'_> {
        Manifest {
            figure: self.id,
            files: self.sweeps.iter().map(|(f, _)| f.as_str()).collect(),
            closed_forms: &self.closed_forms,
        }
    }
}

fn grid2<F>(xn: &str, xs: Vec<f64>, yn: &str, ys: Vec<f64>, outputs: &[&str], f: F) -> Result<SweepResult>
where
    F: Fn(f64, f64) -> Result<Vec<f64>> + Sync,
{
    run_sweep(
        vec![Axis::new(xn, xs), Axis::new(yn, ys)],
        outputs.iter().map(|s| s.to_string()).collect(),
        None,
        |p| f(p[0], p[1]),
    )
}

fn single(id: &'static str, closed_forms: Vec<&'static str>, sweep: SweepResult) -> Figure {
    Figure {
        id,
        closed_forms,
        sweeps: vec![(format!("{id}.csv"), sweep)],
    }
}

/// Builds the data for `id`; `full` adds the expensive original-amplitude
/// variants where they exist.
pub fn reproduce(id: &str, full: bool) -> Result<Figure> {
    let alphas = || linspace(0.05, 2.0, 40);
    let phis = || linspace(0.0, TAU, 33);
    let unit = || linspace(0.0, 1.0, 21);
    let fig = match id {
        "cat-concurrence" => single(
            "cat-concurrence",
            vec!["C = (1 - exp(-4 a^2)) / (1 + exp(-4 a^2) cos phi)"],
            grid2("alpha", alphas(), "phi", phis(), &["concurrence", "closed_form"], |a, phi| {
                let e = (-4.0 * a * a).exp();
                let c = concurrence(&two_mode_cat(a, phi)?.density()?)?;
                Ok(vec![c, (1.0 - e) / (1.0 + e * phi.cos())])
            })?,
        ),
        "cat-dets" => single(
            "cat-dets",
            vec![
                "s1 = -4 a^6 e (e - cos phi) / (1 + e cos phi)^3, e = exp(-4 a^2)",
                "s2 = -4 a^4 e (e + cos phi) / (1 + e cos phi)^3",
                "selected = H(cos(phi + pi)) s1 + H(cos phi) s2, H(0) = 1/2",
            ],
            grid2("alpha", alphas(), "phi", phis(), &["s1", "s2", "selected"], |a, phi| {
                let d = cat_witness_determinants(cr(a), phi);
                Ok(vec![d.s1, d.s2, d.selected])
            })?,
        ),
        "squeezed-det" => single(
            "squeezed-det",
            vec!["s1 = sinh^2 r / 4 - exp(-4 a^2) a^2 cosh^2 r / 2 - exp(-4 a^2) sinh^2 r / 8"],
            grid2("alpha", alphas(), "r", unit(), &["s1"], |a, r| Ok(vec![squeezed_s1(cr(a), r)]))?,
        ),
        "damped-concurrence" => single(
            "damped-concurrence",
            vec![
                "C = exp(-2 (1 - eta) a^2) sqrt(1 - exp(-4 eta a^2))",
                "published: C = 1/2 sqrt(1 - exp(-4 eta a^2)) (sqrt(1 + 3 exp(-4 (1 - eta) a^2)) - sqrt(1 - exp(-4 (1 - eta) a^2)))",
            ],
            grid2("eta", unit(), "alpha", alphas(), &["concurrence", "closed_form", "published_form"], |eta, a| {
                let c = concurrence(&damped(a, eta)?.density()?)?;
                Ok(vec![c, damped_concurrence(a, eta), damped_concurrence_published(a, eta)])
            })?,
        ),
        "logneg-23" => single(
            "logneg-23",
            vec![],
            grid2("p", unit(), "alpha", alphas(), &["log_negativity"], |p, a| {
                Ok(vec![log_negativity(&mixed23(p, a)?.density()?, 1)?])
            })?,
        ),
        "det-24" => single(
            "det-24",
            vec!["s1 = a^2/2 [p(1-p) - exp(-4 a^2)(1 - 3p(1-p)/2)]"],
            grid2("p", unit(), "alpha", alphas(), &["s1", "s1_moments"], |p, a| {
                let st = mixed24(p, a)?;
                let m = determinant(&HybridMoments::qudit_qumode(st.hybrid().expect("hybrid"))?, &S1_ROWS)?;
                Ok(vec![mixed24_s1(p, a), m])
            })?,
        ),
        "thermal-s1" => {
            let eta = 2.0 / 3.0;
            let s = grid2("alpha", alphas(), "n_th", linspace(0.0, 2.0, 21), &["s1"], |a, n| {
                Ok(vec![thermal_s1(a, eta, n)])
            })?
            .with_metadata("eta", format!("{eta}"));
            single(
                "thermal-s1",
                vec!["s1 = (1 - eta)/4 n_th (1 - exp(-4 a^2)/2) - eta a^2/2 exp(-4 a^2)"],
                s,
            )
        }
        "thermal-region" => single(
            "thermal-region",
            vec!["n_th < 4 eta a^2 / ((1 - eta)(2 exp(4 a^2) - 1))"],
            grid2(
                "eta",
                vec![1.0 / 3.0, 0.5, 2.0 / 3.0, 0.9],
                "alpha",
                linspace(0.02, 2.0, 100),
                &["threshold"],
                |eta, a| Ok(vec![thermal_threshold(a, eta)]),
            )?,
        ),
        "arti-s1" => single(
            "arti-s1",
            vec![
                "s1 exact with sum_n sqrt(n) y^n evaluated numerically",
                "s1' = a^2/8 [2x/(1-x) - ((1-x)/(1-x exp(-2a^2)))^2 exp(-4a^2)(3 + 1/(1-x))]",
            ],
            grid2("x", linspace(0.02, 0.98, 49), "alpha", alphas(), &["s1", "s1_bound", "s1_lower"], |x, a| {
                let g = geometric_mixture_s1(x, a)?;
                Ok(vec![g.s1, g.s1_bound, g.s1_lower])
            })?,
        ),
        "residual-ent" => single(
            "residual-ent",
            vec!["tau = (1 - |Q_phi|^2)(1 - |Q_psi|^2)"],
            grid2("q_phi", unit(), "q_psi", unit(), &["tau_res", "closed_form"], |qp, qs| {
                let r = ckw(&tripartite_qmm(cr(qp), cr(qs))?.density()?)?;
                Ok(vec![r.tau_res, (1.0 - qp * qp) * (1.0 - qs * qs)])
            })?,
        ),
        "wigner-cat" => {
            let mut sweeps = vec![("wigner-cat.csv".to_string(), wigner_cat(2.0, PI / 6.0, 6.0, 121)?)];
            if full {
                sweeps.push(("wigner-cat-full.csv".to_string(), wigner_cat(6.0, PI / 6.0, 12.0, 241)?));
            }
            Figure {
                id: "wigner-cat",
                closed_forms: vec!["(|a e^{i phi}> + |a e^{-i phi}>)/sqrt(N)"],
                sweeps,
            }
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown figure '{other}'; valid ids: {}",
                FIGURE_IDS.join(", ")
            )))
        }
    };
    Ok(fig)
}

/// Wigner function of `(|αe^{iφ}⟩ + |αe^{−iφ}⟩)/√N` on a square grid.
pub fn wigner_cat(alpha: f64, phi: f64, half_width: f64, points: usize) -> Result<SweepResult> {
    let cat = project_to_cat(&jcm_generate(alpha, phi)?, 1.0)?;
    let h = cat.hybrid().expect("hybrid payload");
    let n_cut = h.default_cutoffs()[0];
    let rho = h.fock_density(&[n_cut])?;
    let grid = linspace(-half_width, half_width, points);
    let w = wigner(&rho, &grid, &grid)?;
    let mut rows = Vec::with_capacity(grid.len() * grid.len());
    for (i, &x) in grid.iter().enumerate() {
        for (j, &p) in grid.iter().enumerate() {
            rows.push(vec![x, p, w.values[(i, j)]]);
        }
    }
    let s = SweepResult {
        axes: vec![Axis::new("x", grid.clone()), Axis::new("p", grid)],
        outputs: vec!["w".into()],
        rows,
        metadata: vec![],
    };
    Ok(s.with_metadata("alpha", format!("{alpha}"))
        .with_metadata("phi", format!("{phi}"))
        .with_metadata("n_cut", format!("{n_cut}"))
        .with_metadata("integral", format!("{:.11e}", w.integral))
        .with_metadata("min_w", format!("{:.11e}", w.values.min())))
}
