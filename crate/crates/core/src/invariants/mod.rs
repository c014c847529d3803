//! Exact combinatorial invariants: independence, clique, chromatic and
//! fractional chromatic numbers, and the Lovász number.

mod clique;
mod coloring;
mod theta;

use serde::{Deserialize, Serialize};

pub use clique::{
    clique_number, independence_number, maximal_independent_sets, maximum_clique,
    maximum_independent_set,
};
pub use coloring::{
    chromatic_number, fractional_chromatic, rationalize, ColorAssignment, FractionalColoring,
    FractionalMethod, MAX_VERIFY_VERTICES,
};
pub use theta::{lovasz_theta, ThetaResult};

use crate::config::Caps;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalJson {
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub verified: bool,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaJson {
    pub value: f64,
    pub gap: f64,
}

/// Invariants computed within caps; a field is `None` when its computation
/// was skipped, with the reason in `skipped`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub alpha: Option<usize>,
    pub omega: Option<usize>,
    pub chi: Option<usize>,
    pub chi_f: Option<FractionalJson>,
    pub theta: Option<ThetaJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

impl InvariantReport {
    pub fn compute(g: &Graph, caps: &Caps) -> Self {
        let mut skipped = Vec::new();
        fn keep<V>(skipped: &mut Vec<String>, name: &str, r: crate::Result<V>) -> Option<V> {
            r.map_err(|e| skipped.push(format!("{name}: {e}"))).ok()
        }
        let alpha = keep(&mut skipped, "alpha", independence_number(g, caps));
        let omega = keep(&mut skipped, "omega", clique_number(g, caps));
        let chi = keep(&mut skipped, "chi", chromatic_number(g, caps));
        let chi_f = keep(
            &mut skipped,
            "chi_f",
            fractional_chromatic(g, caps).map(|f| FractionalJson {
                p: f.exact.map(|r| *r.numer()),
                q: f.exact.map(|r| *r.denom()),
                verified: f.verified,
                value: f.value,
            }),
        );
        let theta = keep(
            &mut skipped,
            "theta",
            lovasz_theta::<f64>(g, caps).map(|t| ThetaJson {
                value: t.value,
                gap: t.gap,
            }),
        );
        Self {
            alpha,
            omega,
            chi,
            chi_f,
            theta,
            skipped,
        }
    }
}
