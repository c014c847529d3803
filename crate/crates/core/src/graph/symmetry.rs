//! Backtracking isomorphism / automorphism search with colour-refinement
//! pruning. Intended for small graphs only.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{cap_check, Result};

pub const DEFAULT_TRANSITIVITY_CAP: usize = 12;

/// Orbits of the automorphism group on vertices and on edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transitivity {
    pub vertex_orbits: Vec<Vec<usize>>,
    /// Orbits as lists of edge indices into `g.edges()`.
    pub edge_orbits: Vec<Vec<usize>>,
    pub vertex_transitive: bool,
    pub edge_transitive: bool,
}

/// Joint colour refinement of `g` and `h` with the given vertex pairs
/// individualized. Returns `None` when the colour histograms differ.
fn refine(g: &Graph, h: &Graph, pinned: &[(usize, usize)]) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut cg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut ch: Vec<usize> = (0..h.n()).map(|v| h.degree(v)).collect();
    let base = g.n().max(h.n()) + 1;
    for (k, &(a, b)) in pinned.iter().enumerate() {
        cg[a] = base + k;
        ch[b] = base + k;
    }
    let mut classes = 0;
    loop {
        let mut table: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let sig = |graph: &Graph, col: &[usize], v: usize| {
            let mut nb: Vec<usize> = graph.neighbor_iter(v).map(|w| col[w]).collect();
            nb.sort_unstable();
            (col[v], nb)
        };
        let sg: Vec<_> = (0..g.n()).map(|v| sig(g, &cg, v)).collect();
        let sh: Vec<_> = (0..h.n()).map(|v| sig(h, &ch, v)).collect();
        let mut keys: Vec<&(usize, Vec<usize>)> = sg.iter().chain(sh.iter()).collect();
        keys.sort();
        keys.dedup();
        for (i, k) in keys.into_iter().enumerate() {
            table.insert(k.clone(), i);
        }
        cg = sg.iter().map(|s| table[s]).collect();
        ch = sh.iter().map(|s| table[s]).collect();
        let mut hist_g = vec![0usize; table.len()];
        let mut hist_h = vec![0usize; table.len()];
        cg.iter().for_each(|&c| hist_g[c] += 1);
        ch.iter().for_each(|&c| hist_h[c] += 1);
        if hist_g != hist_h {
            return None;
        }
        if table.len() == classes {
            return Some((cg, ch));
        }
        classes = table.len();
    }
}

/// Finds a bijection `f` with `u~v ⇔ f(u)~f(v)` and `f(a)=b` for each pinned pair.
fn search(g: &Graph, h: &Graph, pinned: &[(usize, usize)]) -> Option<Vec<usize>> {
    if g.n() != h.n() || g.m() != h.m() {
        return None;
    }
    let n = g.n();
    let (cg, ch) = refine(g, h, pinned)?;

    // order: pinned first, then greedily by connectivity to the ordered prefix
    let mut order: Vec<usize> = pinned.iter().map(|p| p.0).collect();
    let mut placed = vec![false; n];
    for &v in &order {
        placed[v] = true;
    }
    let class_size = |c: usize| cg.iter().filter(|&&x| x == c).count();
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let conn = order.iter().filter(|&&u| g.has_edge(u, v)).count();
                (
                    conn,
                    std::cmp::Reverse(class_size(cg[v])),
                    std::cmp::Reverse(v),
                )
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        depth: usize,
        order: &[usize],
        g: &Graph,
        h: &Graph,
        cg: &[usize],
        ch: &[usize],
        pinned: &[(usize, usize)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        let forced = pinned.get(depth).map(|p| p.1);
        let candidates: Vec<usize> = match forced {
            Some(w) => vec![w],
            // try the identity image first
            None => std::iter::once(v)
                .chain((0..h.n()).filter(|&w| w != v))
                .collect(),
        };
        for w in candidates {
            if used[w] || cg[v] != ch[w] {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&u| g.has_edge(u, v) == h.has_edge(map[u], w));
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if rec(depth + 1, order, g, h, cg, ch, pinned, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
    rec(0, &order, g, h, &cg, &ch, pinned, &mut map, &mut used).then_some(map)
}

/// An isomorphism `g → h` as a vertex map, if one exists.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g == h {
        return Some((0..g.n()).collect());
    }
    search(g, h, &[])
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}

fn orbits(count: usize, mut related: impl FnMut(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; count];
    let mut out = Vec::new();
    for rep in 0..count {
        if assigned[rep] {
            continue;
        }
        assigned[rep] = true;
        let mut orbit = vec![rep];
        for x in rep + 1..count {
            if !assigned[x] && related(rep, x) {
                assigned[x] = true;
                orbit.push(x);
            }
        }
        out.push(orbit);
    }
    out
}

/// Computes vertex and edge orbits of `Aut(g)` by exhaustive search.
pub fn check_transitivity(g: &Graph, cap: usize) -> Result<Transitivity> {
    cap_check(
        "vertex count for transitivity check",
        g.n() as u128,
        cap as u128,
    )?;
    let vertex_orbits = orbits(g.n(), |a, b| search(g, g, &[(a, b)]).is_some());
    let edges = g.edges();
    let edge_orbits = orbits(edges.len(), |i, j| {
        let (a, b) = edges[i];
        let (c, d) = edges[j];
        search(g, g, &[(a, c), (b, d)]).is_some() || search(g, g, &[(a, d), (b, c)]).is_some()
    });
    Ok(Transitivity {
        vertex_transitive: vertex_orbits.len() <= 1,
        edge_transitive: edge_orbits.len() <= 1,
        vertex_orbits,
        edge_orbits,
    })
}
