use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bounds::{eta_line_skew, eta_upper_degree, prepare_root};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::graph::{are_isomorphic, gen_family, Family, Graph};
use crate::spectral::{
    exists_partial_hadamard, find_weighing_orientation, skew_conference_exists, Orientation,
};

/// Families with a known formula for η.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ClosedFormFamily {
    Complete {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    /// `J(n, 2) = L(K_n)`.
    Johnson2 {
        n: usize,
    },
    /// `L(Q_d)`.
    HypercubeLine {
        d: usize,
    },
    /// `K_r □ K_s = L(K_{r,s})`.
    Rook {
        r: usize,
        s: usize,
    },
    Path {
        n: usize,
    },
}

/// Combinatorial object whose existence decides equality in a bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExistenceCondition {
    SkewConference {
        order: usize,
        exists: Option<bool>,
    },
    PartialHadamard {
        rows: usize,
        cols: usize,
        exists: Option<bool>,
    },
}

impl ExistenceCondition {
    pub fn exists(&self) -> Option<bool> {
        match self {
            Self::SkewConference { exists, .. } | Self::PartialHadamard { exists, .. } => *exists,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub family: ClosedFormFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    pub upper: f64,
    /// Set when the formula pins η down.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<ExistenceCondition>,
}

impl ClosedForm {
    fn exact(family: ClosedFormFamily, v: f64) -> Self {
        Self {
            family,
            lower: Some(v),
            upper: v,
            exact: Some(v),
            condition: None,
        }
    }
}

fn csc(x: f64) -> f64 {
    1.0 / x.sin()
}

fn cot(x: f64) -> f64 {
    1.0 / x.tan()
}

fn invalid(msg: &str) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Formula value for a family. Johnson and rook graphs give a bound whose
/// equality hinges on an existence question, answered by exhaustive search
/// where feasible.
///
/// Equality for `J(n,2)` is tied to a skew-conference matrix of order `n`, the
/// size of the skew-adjacency matrix of an orientation of `K_n`. A later
/// summary statement phrases the same condition with order `n − 1`; order `n`
/// is the one the derivation supports and the one used here.
pub fn closed_form(family: &ClosedFormFamily, caps: &Caps) -> Result<ClosedForm> {
    use ClosedFormFamily as F;
    Ok(match *family {
        F::Complete { n } => {
            if n < 1 {
                return Err(invalid("complete graph needs n >= 1"));
            }
            ClosedForm::exact(family.clone(), (n as f64).powf(-0.5))
        }
        F::Cycle { n } => {
            if n < 3 {
                return Err(invalid("cycle needs n >= 3"));
            }
            let nf = n as f64;
            let v = if n % 2 == 1 {
                cot(PI / (2.0 * nf)) / nf
            } else {
                2.0 * csc(PI / nf) / nf
            };
            ClosedForm::exact(family.clone(), v)
        }
        F::Johnson2 { n } => {
            if n < 2 {
                return Err(invalid("J(n,2) needs n >= 2"));
            }
            let upper = ((n - 1) as f64).powf(-0.5);
            let exists = skew_conference_exists(n, caps);
            ClosedForm {
                family: family.clone(),
                lower: (exists == Some(true)).then_some(upper),
                upper,
                exact: (exists == Some(true)).then_some(upper),
                condition: Some(ExistenceCondition::SkewConference { order: n, exists }),
            }
        }
        F::HypercubeLine { d } => {
            if d < 1 {
                return Err(invalid("hypercube needs d >= 1"));
            }
            ClosedForm::exact(family.clone(), (d as f64).powf(-0.5))
        }
        F::Rook { r, s } => {
            if r < 1 || s < 1 {
                return Err(invalid("rook graph needs r, s >= 1"));
            }
            let (r, s) = (r.min(s), r.max(s));
            let upper = (s as f64).powf(-0.5);
            let exists = exists_partial_hadamard(r, s);
            ClosedForm {
                family: family.clone(),
                lower: (exists == Some(true)).then_some(upper),
                upper,
                exact: (exists == Some(true)).then_some(upper),
                condition: Some(ExistenceCondition::PartialHadamard {
                    rows: r,
                    cols: s,
                    exists,
                }),
            }
        }
        F::Path { n } => {
            if n < 1 {
                return Err(invalid("path needs n >= 1"));
            }
            let nf = n as f64;
            let (lower, upper) = if n % 2 == 0 {
                (
                    2.0 / (nf + 2.0) * csc(PI / (nf + 2.0)),
                    cot(PI / (2.0 * (nf + 2.0))) / nf - 1.0 / nf,
                )
            } else {
                (
                    2.0 / (nf + 1.0) * csc(PI / (nf + 1.0)),
                    csc(PI / (2.0 * (nf + 2.0))) / nf - 1.0 / nf,
                )
            };
            // n = 1, 2 are exact (one observable; an anti-commuting pair)
            let exact = ((upper - lower).abs() <= 1e-12).then_some(lower);
            ClosedForm {
                family: family.clone(),
                lower: Some(lower),
                upper,
                exact,
                condition: None,
            }
        }
    })
}

/// Largest hypercube dimension recognized as a line-graph root.
const MAX_RECOGNIZED_CUBE: usize = 6;

fn hypercube_dimension(root: &Graph) -> Option<usize> {
    let n = root.n();
    if !n.is_power_of_two() {
        return None;
    }
    let d = n.trailing_zeros() as usize;
    if d == 0 || d > MAX_RECOGNIZED_CUBE || root.regular_degree() != Some(d) {
        return None;
    }
    let q = gen_family(&Family::Hypercube { d }).ok()?;
    are_isomorphic(root, &q).then_some(d)
}

/// Family with a formula: from metadata first, then by structure for complete
/// graphs, cycles and paths.
pub fn recognize_family(g: &Graph) -> Option<ClosedFormFamily> {
    use ClosedFormFamily as F;
    if let Some(meta) = g.meta() {
        let f = match &meta.family {
            Family::Complete { n } => Some(F::Complete { n: *n }),
            Family::Cycle { n } => Some(F::Cycle { n: *n }),
            Family::Path { n } => Some(F::Path { n: *n }),
            Family::Johnson { n, k: 2 } => Some(F::Johnson2 { n: *n }),
            Family::MergedJohnson { n, k: 2, l } if l == &[1] => Some(F::Johnson2 { n: *n }),
            Family::Rook { r, s } => Some(F::Rook { r: *r, s: *s }),
            Family::LineOf { root_n, root_edges } => {
                Graph::new(*root_n, root_edges.iter().copied())
                    .ok()
                    .and_then(|root| hypercube_dimension(&root))
                    .map(|d| F::HypercubeLine { d })
            }
            _ => None,
        };
        if f.is_some() {
            return f;
        }
    }
    let n = g.n();
    if n == 0 || !g.is_connected() {
        return None;
    }
    if g.m() == n * (n - 1) / 2 {
        return Some(F::Complete { n });
    }
    if n >= 3 && g.regular_degree() == Some(2) {
        return Some(F::Cycle { n });
    }
    if g.m() == n - 1 && g.max_degree() <= 2 {
        return Some(F::Path { n });
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    /// The degree bound is attained; the certificate is a weighing orientation.
    Optimal {
        certificate: Orientation,
    },
    NotOptimal {
        reason: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gap: Option<f64>,
    },
    Inconclusive {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimalityCheck {
    /// `(n / 2m)·√Δ`.
    pub degree_bound: f64,
    pub regular_degree: Option<usize>,
    /// `ℰ_s^max / 2m` when the class enumeration ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_skew: Option<f64>,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// Whether `L(root)` attains the degree bound. Regularity and a weighing
/// orientation `SᵀS = Δ·I` are necessary; with edge-transitivity the skew
/// bound is attained, which makes them sufficient.
pub fn optimal_incompatibility_check(root: &Graph, caps: &Caps) -> Result<OptimalityCheck> {
    let (core, _) = prepare_root(root, caps)?;
    let degree_bound = eta_upper_degree(&core)?.value;
    let regular = core.regular_degree();
    let line = match eta_line_skew(root, caps) {
        Ok(l) => Some(l),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let line_skew = line.as_ref().map(|l| l.value);
    let gap = line_skew.map(|v| degree_bound - v);
    let verdict = match (regular, &line) {
        (None, _) => Verdict::NotOptimal {
            reason: "root is not regular".into(),
            gap,
        },
        (Some(_), None) => Verdict::Inconclusive {
            reason: "switching-class enumeration exceeds the cap".into(),
        },
        (Some(delta), Some(l)) => {
            if l.value < degree_bound - 1e-9 {
                Verdict::NotOptimal {
                    reason: "maximum skew energy is below the degree bound".into(),
                    gap,
                }
            } else {
                match find_weighing_orientation(&core, delta, caps)? {
                    Some(o) if l.exact => Verdict::Optimal { certificate: o },
                    Some(_) => Verdict::Inconclusive {
                        reason: "weighing orientation exists but edge-transitivity of the root is unknown".into(),
                    },
                    None => Verdict::Inconclusive {
                        reason: "skew energy meets the bound numerically but no weighing orientation was found".into(),
                    },
                }
            }
        }
    };
    Ok(OptimalityCheck {
        degree_bound,
        regular_degree: regular,
        line_skew,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::matrix_certificates;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn formulas() {
        use ClosedFormFamily as F;
        let c4 = closed_form(&F::Cycle { n: 4 }, &caps()).unwrap();
        assert!((c4.exact.unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        let c5 = closed_form(&F::Cycle { n: 5 }, &caps()).unwrap();
        assert!((c5.exact.unwrap() - 0.615537).abs() < 1e-6);
        let c3 = closed_form(&F::Cycle { n: 3 }, &caps()).unwrap();
        assert!((c3.exact.unwrap() - 3f64.powf(-0.5)).abs() < 1e-12);

        let p4 = closed_form(&F::Path { n: 4 }, &caps()).unwrap();
        assert!((p4.lower.unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((p4.upper - (1.0 + 3f64.sqrt()) / 4.0).abs() < 1e-12);
        let p2 = closed_form(&F::Path { n: 2 }, &caps()).unwrap();
        assert!((p2.exact.unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(
            closed_form(&F::Path { n: 1 }, &caps())
                .unwrap()
                .exact
                .map(|v| (v * 1e9).round()),
            Some(1e9)
        );

        let rook = closed_form(&F::Rook { r: 2, s: 2 }, &caps()).unwrap();
        assert!((rook.exact.unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        let rook = closed_form(&F::Rook { r: 3, s: 2 }, &caps()).unwrap();
        assert_eq!(rook.exact, None);
        assert_eq!(rook.condition.unwrap().exists(), Some(false));

        let j4 = closed_form(&F::Johnson2 { n: 4 }, &caps()).unwrap();
        assert!((j4.exact.unwrap() - 3f64.powf(-0.5)).abs() < 1e-12);
        let j5 = closed_form(&F::Johnson2 { n: 5 }, &caps()).unwrap();
        assert_eq!(j5.exact, None);
        assert!(closed_form(&F::Cycle { n: 2 }, &caps()).is_err());
    }

    #[test]
    fn recognition() {
        use ClosedFormFamily as F;
        let q3 = gen_family(&Family::Hypercube { d: 3 }).unwrap();
        let (lq, _) = crate::graph::line_graph(&q3);
        assert_eq!(recognize_family(&lq), Some(F::HypercubeLine { d: 3 }));
        let c6 = gen_family(&Family::Cycle { n: 6 }).unwrap().without_meta();
        assert_eq!(recognize_family(&c6), Some(F::Cycle { n: 6 }));
        let p = gen_family(&Family::Path { n: 5 }).unwrap().without_meta();
        assert_eq!(recognize_family(&p), Some(F::Path { n: 5 }));
        let paw = Graph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        assert_eq!(recognize_family(&paw), None);
    }

    #[test]
    fn optimality_verdicts() {
        let q3 = gen_family(&Family::Hypercube { d: 3 }).unwrap();
        let check = optimal_incompatibility_check(&q3, &caps()).unwrap();
        match &check.verdict {
            Verdict::Optimal { certificate } => {
                let c = matrix_certificates(&certificate.skew_integer_matrix()).unwrap();
                assert_eq!(c.weighing, Some(3));
            }
            v => panic!("{v:?}"),
        }

        let c5 = gen_family(&Family::Cycle { n: 5 }).unwrap();
        let check = optimal_incompatibility_check(&c5, &caps()).unwrap();
        assert!(matches!(check.verdict, Verdict::NotOptimal { .. }));
        assert!((check.degree_bound - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((check.line_skew.unwrap() - 0.615537).abs() < 1e-6);

        let k23 = gen_family(&Family::CompleteBipartite { r: 2, s: 3 }).unwrap();
        let check = optimal_incompatibility_check(&k23, &caps()).unwrap();
        assert_eq!(check.regular_degree, None);
        assert!(matches!(check.verdict, Verdict::NotOptimal { .. }));

        let k4 = gen_family(&Family::Complete { n: 4 }).unwrap();
        let check = optimal_incompatibility_check(&k4, &caps()).unwrap();
        assert!(matches!(check.verdict, Verdict::Optimal { .. }));
    }
}
