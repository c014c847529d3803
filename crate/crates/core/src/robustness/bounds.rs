use rayon::prelude::*;

use super::closed_form::{recognize_family, ClosedFormFamily};
use super::{BoundKind, BoundRecord, Method};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::graph::{check_transitivity, gen_family, Family, Graph};
use crate::invariants::{
    chromatic_number, fractional_chromatic, lovasz_theta, maximum_clique, FractionalMethod,
};
use crate::spectral::{graph_energy, max_skew_energy, Orientation};

/// `η ≤ √(ϑ/|V|)`, using the certified upper end of the ϑ enclosure.
pub fn eta_upper_lovasz(g: &Graph, caps: &Caps) -> Result<BoundRecord> {
    if g.n() == 0 {
        return Err(Error::InvalidInput("empty graph".into()));
    }
    let t = lovasz_theta::<f64>(g, caps)?;
    Ok(BoundRecord::new(
        Method::Lovasz,
        (t.upper / g.n() as f64).sqrt().min(1.0),
        BoundKind::Upper,
    )
    .with_certificate(format!("theta in [{:.12}, {:.12}]", t.lower, t.upper)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgraphStrategy {
    /// A maximum clique `S`, where `√(ϑ(K_ω)/ω) = ω^{-1/2}`.
    Clique,
    /// Maximum clique, the whole graph, and every induced subgraph with one or
    /// two vertices deleted (two only up to [`DEPTH_TWO_LIMIT`] vertices).
    Search,
}

pub const DEPTH_TWO_LIMIT: usize = 12;

fn format_set(s: &[usize]) -> String {
    let items: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("S = {{{}}}", items.join(", "))
}

/// Upper bound `η(G) ≤ η(G[S]) ≤ √(ϑ(G[S])/|S|)` over candidate subsets.
pub fn eta_upper_subgraph(
    g: &Graph,
    strategy: SubgraphStrategy,
    caps: &Caps,
) -> Result<BoundRecord> {
    if g.n() == 0 {
        return Err(Error::InvalidInput("empty graph".into()));
    }
    let clique = maximum_clique(g, caps)?;
    let clique_value = (clique.len() as f64).powf(-0.5);
    if strategy == SubgraphStrategy::Clique {
        return Ok(
            BoundRecord::new(Method::Clique, clique_value, BoundKind::Upper)
                .with_certificate(format!("clique {}", format_set(&clique))),
        );
    }
    let n = g.n();
    let all: Vec<usize> = (0..n).collect();
    let mut candidates = vec![all.clone()];
    candidates.extend((0..n).map(|v| all.iter().copied().filter(|&u| u != v).collect()));
    if n <= DEPTH_TWO_LIMIT {
        for a in 0..n {
            for b in a + 1..n {
                candidates.push(all.iter().copied().filter(|&u| u != a && u != b).collect());
            }
        }
    }
    candidates.retain(|s: &Vec<usize>| !s.is_empty());
    let scored: Vec<(f64, Vec<usize>)> = candidates
        .into_par_iter()
        .map(|s| {
            let t = lovasz_theta::<f64>(&g.induced_subgraph(&s), caps)?;
            Ok(((t.upper / s.len() as f64).sqrt(), s))
        })
        .collect::<Result<_>>()?;
    let (mut best, mut set) = (clique_value, clique);
    for (v, s) in scored {
        if v < best - 1e-12 {
            best = v;
            set = s;
        }
    }
    let mut r = BoundRecord::new(Method::SubgraphSearch, best.min(1.0), BoundKind::Upper)
        .with_certificate(format_set(&set));
    r.heuristic = true;
    Ok(r)
}

/// `η ≥ 1/χ_f`: exact when the ratio is certified, otherwise from a repaired
/// LP cover (a sound upper bound on `χ_f`).
pub fn eta_lower_fractional(g: &Graph, caps: &Caps) -> Result<BoundRecord> {
    let f = fractional_chromatic(g, caps)?;
    let (value, cert) = match (f.exact, &f.coloring) {
        (Some(_), Some(c)) => (
            c.b as f64 / c.a as f64,
            format!("verified {}:{} colouring", c.a, c.b),
        ),
        (Some(r), None) if f.method == FractionalMethod::VertexTransitive => (
            *r.denom() as f64 / *r.numer() as f64,
            format!("vertex-transitive, chi_f = {}/{}", r.numer(), r.denom()),
        ),
        _ => (
            1.0 / f.upper,
            format!("LP cover, chi_f <= {:.12} (unverified)", f.upper),
        ),
    };
    Ok(BoundRecord::new(Method::Fractional, value, BoundKind::Lower).with_certificate(cert))
}

/// `η ≥ 1/χ`, the integral special case of the fractional bound.
pub fn eta_lower_chromatic(g: &Graph, caps: &Caps) -> Result<BoundRecord> {
    let chi = chromatic_number(g, caps)?.max(1);
    Ok(
        BoundRecord::new(Method::Chromatic, 1.0 / chi as f64, BoundKind::Lower)
            .with_certificate(format!("chi = {chi}")),
    )
}

/// Root graph of a line graph, from family metadata or, failing that, from
/// recognizing a complete graph, cycle or path.
pub fn line_root(g: &Graph) -> Option<Graph> {
    let from_meta = g.meta().and_then(|m| match m.family.clone() {
        Family::Cycle { n } => Some(Family::Cycle { n }),
        Family::Path { n } => Some(Family::Path { n: n + 1 }),
        Family::Complete { n } => Some(Family::CompleteBipartite { r: 1, s: n }),
        Family::Johnson { n, k: 2 } => Some(Family::Complete { n }),
        Family::MergedJohnson { n, k: 2, ref l } if l == &[1] => Some(Family::Complete { n }),
        Family::Rook { r, s } => Some(Family::CompleteBipartite { r, s }),
        Family::LineOf { root_n, root_edges } => Some(Family::LineOf { root_n, root_edges }),
        _ => None,
    });
    let family = from_meta.or_else(|| match recognize_family(g)? {
        ClosedFormFamily::Complete { n } => Some(Family::CompleteBipartite { r: 1, s: n }),
        ClosedFormFamily::Cycle { n } => Some(Family::Cycle { n }),
        ClosedFormFamily::Path { n } => Some(Family::Path { n: n + 1 }),
        _ => None,
    })?;
    match family {
        Family::LineOf { root_n, root_edges } => Graph::new(root_n, root_edges).ok(),
        f => gen_family(&f).ok(),
    }
}

/// Root without isolated vertices, and whether it is edge-transitive
/// (metadata first, then the brute-force checker within its cap).
pub(super) fn prepare_root(root: &Graph, caps: &Caps) -> Result<(Graph, Option<bool>)> {
    let flag = root.meta().and_then(|m| m.edge_transitive);
    let used: Vec<usize> = (0..root.n()).filter(|&v| root.degree(v) > 0).collect();
    if used.is_empty() {
        return Err(Error::InvalidInput("root graph has no edges".into()));
    }
    let core = if used.len() == root.n() {
        root.clone()
    } else {
        root.induced_subgraph(&used)
    };
    if !core.is_connected() {
        return Err(Error::Disconnected);
    }
    let et = flag.or_else(|| {
        check_transitivity(&core, caps.max_transitivity_vertices)
            .ok()
            .map(|t| t.edge_transitive)
    });
    Ok((core, et))
}

#[derive(Clone, Debug)]
pub struct LineSkew {
    /// `ℰ_s^max(root) / 2m`.
    pub value: f64,
    pub max_skew_energy: f64,
    /// Equality holds (root edge-transitive).
    pub exact: bool,
    pub edge_transitive: Option<bool>,
    pub witness: Orientation,
}

impl LineSkew {
    pub fn record(&self) -> BoundRecord {
        let kind = if self.exact {
            BoundKind::Exact
        } else {
            BoundKind::Upper
        };
        let et = match self.edge_transitive {
            Some(true) => "edge-transitive root",
            Some(false) => "root not edge-transitive",
            None => "edge-transitivity unknown",
        };
        BoundRecord::new(Method::LineSkew, self.value, kind).with_certificate(format!(
            "max skew energy {:.12}, {et}",
            self.max_skew_energy
        ))
    }
}

/// Skew-energy bound for `L(root)`, exact only when edge-transitivity is known.
pub fn eta_line_skew(root: &Graph, caps: &Caps) -> Result<LineSkew> {
    let (core, et) = prepare_root(root, caps)?;
    let (e, witness) = max_skew_energy::<f64>(&core, caps)?;
    Ok(LineSkew {
        value: e / (2.0 * core.m() as f64),
        max_skew_energy: e,
        exact: et == Some(true),
        edge_transitive: et,
        witness,
    })
}

/// `η(L(G)) ≤ (n / 2m)·√Δ` for the root `G` (isolated vertices dropped).
pub fn eta_upper_degree(root: &Graph) -> Result<BoundRecord> {
    let used = (0..root.n()).filter(|&v| root.degree(v) > 0).count();
    if root.m() == 0 {
        return Err(Error::InvalidInput("root graph has no edges".into()));
    }
    let delta = root.max_degree();
    let value = used as f64 * (delta as f64).sqrt() / (2.0 * root.m() as f64);
    Ok(
        BoundRecord::new(Method::DegreeBound, value, BoundKind::Upper)
            .with_certificate(format!("n = {used}, m = {}, max degree {delta}", root.m())),
    )
}

/// `η(L(G)) ≥ ℰ(G)/2m` for a bipartite edge-transitive root.
pub fn eta_lower_bipartite_energy(root: &Graph, caps: &Caps) -> Result<BoundRecord> {
    let (core, et) = prepare_root(root, caps)?;
    if !core.is_bipartite() {
        return Err(Error::Precondition("root graph is not bipartite".into()));
    }
    if et != Some(true) {
        return Err(Error::Precondition(
            "root graph is not known to be edge-transitive".into(),
        ));
    }
    let e = graph_energy::<f64>(&core);
    Ok(BoundRecord::new(
        Method::BipartiteEnergy,
        e / (2.0 * core.m() as f64),
        BoundKind::Lower,
    )
    .with_certificate(format!("energy {e:.12}")))
}
