//! State-spec files.
//!
//! ```toml
//! family = "two_mode_cat"
//!
//! [params]
//! alpha = 1.0
//! phi = 3.141592653589793
//!
//! [numerics]
//! cutoff = 40
//! ```
//!
//! Instead of `family`, an `[inline]` table describes a hybrid state
//! directly:
//!
//! ```toml
//! [inline]
//! slots = ["qudit:2", "qumode"]
//!
//! [[inline.terms]]
//! prob = 1.0
//! branches = [
//!   { coeff = [0.7071067811865476, 0.0], factors = [{ level = 0 }, { coherent = [1.0, 0.0] }] },
//!   { coeff = [0.7071067811865476, 0.0], factors = [{ level = 1 }, { coherent = [-1.0, 0.0] }] },
//! ]
//! ```
//!
//! Unknown keys anywhere are rejected.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Deserialize;

use crate::catalog::{self, NamedState, Payload};
use crate::compression::{Branch, Factor, HybridState, Slot, Term};
use crate::error::{invalid, Result};
use crate::kets::SymbolicKet;
use crate::witness::QuditOps;

/// Environment variable overriding the default Fock cutoff.
pub const CUTOFF_ENV: &str = "HYENT_CUTOFF";

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub family: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub inline: Option<InlineState>,
    #[serde(default)]
    pub numerics: Numerics,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    /// Fock cutoff for truncated evaluations.
    pub cutoff: Option<usize>,
    /// `"adapted"` (default) or `"embedded"` qudit operators in moments.
    pub qudit_ops: Option<String>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InlineState {
    pub slots: Vec<String>,
    pub terms: Vec<InlineTerm>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InlineTerm {
    pub prob: f64,
    pub branches: Vec<InlineBranch>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InlineBranch {
    pub coeff: [f64; 2],
    pub factors: Vec<InlineFactor>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InlineFactor {
    Level(usize),
    Coherent([f64; 2]),
    Fock(usize),
    Squeezed { alpha: [f64; 2], r: f64, theta: f64 },
    PhotonAdded { k: usize, alpha: [f64; 2] },
}

fn cx(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

impl InlineFactor {
    fn to_factor(&self) -> Factor {
        match *self {
            InlineFactor::Level(l) => Factor::Level(l),
            InlineFactor::Coherent(a) => Factor::Ket(SymbolicKet::Coherent(cx(a))),
            InlineFactor::Fock(n) => Factor::Ket(SymbolicKet::Fock(n)),
            InlineFactor::Squeezed { alpha, r, theta } => Factor::Ket(SymbolicKet::DisplacedSqueezed {
                alpha: cx(alpha),
                r,
                theta,
            }),
            InlineFactor::PhotonAdded { k, alpha } => {
                Factor::Ket(SymbolicKet::PhotonAddedCoherent { k, alpha: cx(alpha) })
            }
        }
    }
}

fn parse_slot(s: &str) -> Result<Slot> {
    if s == "qumode" {
        return Ok(Slot::Qumode);
    }
    if let Some(d) = s.strip_prefix("qudit:") {
        if let Ok(d) = d.parse::<usize>() {
            return Ok(Slot::Qudit(d));
        }
    }
    invalid(format!("slot '{s}' is neither 'qumode' nor 'qudit:<d>'"))
}

impl InlineState {
    pub fn build(&self) -> Result<HybridState> {
        let slots = self.slots.iter().map(|s| parse_slot(s)).collect::<Result<Vec<_>>>()?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Term::new(
                    t.prob,
                    t.branches
                        .iter()
                        .map(|b| Branch::new(cx(b.coeff), b.factors.iter().map(InlineFactor::to_factor).collect()))
                        .collect(),
                )
            })
            .collect();
        HybridState::new(slots, terms)
    }
}

impl StateSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let spec: StateSpec =
            toml::from_str(text).map_err(|e| crate::Error::InvalidArgument(format!("state spec: {e}")))?;
        match (&spec.family, &spec.inline) {
            (Some(_), Some(_)) => return invalid("state spec has both 'family' and 'inline'"),
            (None, None) => return invalid("state spec needs 'family' or 'inline'"),
            (None, Some(_)) if !spec.params.is_empty() => return invalid("'params' only applies to catalog families"),
            _ => {}
        }
        if let Some(ops) = &spec.numerics.qudit_ops {
            if ops != "adapted" && ops != "embedded" {
                return invalid(format!("qudit_ops '{ops}' is neither 'adapted' nor 'embedded'"));
            }
        }
        if spec.numerics.cutoff == Some(0) {
            return invalid("cutoff must be positive");
        }
        Ok(spec)
    }

    /// Builds the state, with `overrides` replacing catalog parameters.
    pub fn build_with(&self, overrides: &[(String, f64)]) -> Result<NamedState> {
        if let Some(inline) = &self.inline {
            if !overrides.is_empty() {
                return invalid("sweep axes need a catalog family");
            }
            return Ok(NamedState {
                id: "inline",
                params: vec![],
                payload: Payload::Hybrid(inline.build()?),
            });
        }
        let mut params = self.params.clone();
        for (k, v) in overrides {
            params.insert(k.clone(), *v);
        }
        catalog::build(self.family.as_deref().unwrap_or_default(), &params)
    }

    pub fn build(&self) -> Result<NamedState> {
        self.build_with(&[])
    }

    pub fn label(&self) -> &str {
        self.family.as_deref().unwrap_or("inline")
    }

    pub fn qudit_ops(&self) -> QuditOps {
        match self.numerics.qudit_ops.as_deref() {
            Some("embedded") => QuditOps::Embedded,
            _ => QuditOps::Adapted,
        }
    }

    /// Spec value, then the environment variable, then automatic.
    pub fn cutoff(&self) -> Result<Option<usize>> {
        if let Some(c) = self.numerics.cutoff {
            return Ok(Some(c));
        }
        env_cutoff()
    }
}

pub fn env_cutoff() -> Result<Option<usize>> {
    match std::env::var(CUTOFF_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => invalid(format!("{CUTOFF_ENV}='{v}' is not a positive integer")),
        },
        Err(_) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_spec() {
        let s = StateSpec::parse("family = \"he_state\"\n[params]\nalpha = 0.5\n[numerics]\ncutoff = 12\n").unwrap();
        assert_eq!(s.numerics.cutoff, Some(12));
        assert_eq!(s.build().unwrap().id, "he_state");
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(StateSpec::parse("family = \"ghz\"\ncolour = 1\n").is_err());
        assert!(StateSpec::parse("family = \"ghz\"\n[numerics]\ncutof = 3\n").is_err());
        let s = StateSpec::parse("family = \"ghz\"\n[params]\nalpha = 1.0\n").unwrap();
        assert!(s.build().is_err());
        assert!(StateSpec::parse("[params]\nalpha = 1.0\n").is_err());
    }

    #[test]
    fn inline_state() {
        let text = r#"
[inline]
slots = ["qudit:2", "qumode"]

[[inline.terms]]
prob = 1.0
branches = [
  { coeff = [0.7071067811865476, 0.0], factors = [{ level = 0 }, { coherent = [1.0, 0.0] }] },
  { coeff = [0.7071067811865476, 0.0], factors = [{ level = 1 }, { coherent = [-1.0, 0.0] }] },
]
"#;
        let s = StateSpec::parse(text).unwrap();
        let st = s.build().unwrap();
        assert_eq!(st.density().unwrap().dims(), &[2, 2]);
        let bad = text.replace("{ level = 0 }", "{ level = 0, extra = 1 }");
        assert!(StateSpec::parse(&bad).is_err());
    }
}
