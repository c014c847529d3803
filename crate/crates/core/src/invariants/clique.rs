use crate::config::Caps;
use crate::error::{cap_check, Result};
use crate::graph::{BitSet, Graph};

/// Greedy sequential colouring of `p`; returns vertices with their
/// (nondecreasing) colour numbers, the bound used for pruning.
fn color_sort(g: &Graph, p: &BitSet) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::new();
    let mut colors = Vec::new();
    let mut uncolored = p.clone();
    let mut k = 0;
    while !uncolored.is_empty() {
        k += 1;
        let mut q = uncolored.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            uncolored.remove(v);
            q.and_not_with(g.neighbors(v));
            order.push(v);
            colors.push(k);
        }
    }
    (order, colors)
}

fn expand(g: &Graph, r: &mut Vec<usize>, mut p: BitSet, best: &mut Vec<usize>) {
    let (order, colors) = color_sort(g, &p);
    for i in (0..order.len()).rev() {
        if r.len() + colors[i] <= best.len() {
            return;
        }
        let v = order[i];
        r.push(v);
        let mut np = p.clone();
        np.and_with(g.neighbors(v));
        if np.is_empty() {
            if r.len() > best.len() {
                *best = r.clone();
            }
        } else {
            expand(g, r, np, best);
        }
        r.pop();
        p.remove(v);
    }
}

/// A maximum clique (sorted) by colour-bounded branch and bound.
pub fn maximum_clique(g: &Graph, caps: &Caps) -> Result<Vec<usize>> {
    cap_check(
        "vertex count for exact clique search",
        g.n() as u128,
        caps.max_exact_vertices as u128,
    )?;
    let mut best = Vec::new();
    expand(g, &mut Vec::new(), BitSet::full(g.n()), &mut best);
    best.sort_unstable();
    Ok(best)
}

pub fn maximum_independent_set(g: &Graph, caps: &Caps) -> Result<Vec<usize>> {
    maximum_clique(&g.complement(), caps)
}

pub fn clique_number(g: &Graph, caps: &Caps) -> Result<usize> {
    Ok(maximum_clique(g, caps)?.len())
}

pub fn independence_number(g: &Graph, caps: &Caps) -> Result<usize> {
    Ok(maximum_independent_set(g, caps)?.len())
}

/// All maximal independent sets (Bron–Kerbosch with pivoting on the complement).
pub fn maximal_independent_sets(g: &Graph, caps: &Caps) -> Result<Vec<Vec<usize>>> {
    cap_check(
        "vertex count for independent-set enumeration",
        g.n() as u128,
        caps.max_mis_vertices as u128,
    )?;
    let h = g.complement();
    let mut out = Vec::new();
    fn bk(h: &Graph, r: &mut Vec<usize>, mut p: BitSet, mut x: BitSet, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            let mut s = r.clone();
            s.sort_unstable();
            out.push(s);
            return;
        }
        // pivot maximizing |P ∩ N(u)|
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| p.intersection_len(h.neighbors(u)))
            .unwrap();
        let mut cand = p.clone();
        cand.and_not_with(h.neighbors(pivot));
        for v in cand.iter().collect::<Vec<_>>() {
            let mut np = p.clone();
            np.and_with(h.neighbors(v));
            let mut nx = x.clone();
            nx.and_with(h.neighbors(v));
            r.push(v);
            bk(h, r, np, nx, out);
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }
    bk(
        &h,
        &mut Vec::new(),
        BitSet::full(g.n()),
        BitSet::new(g.n()),
        &mut out,
    );
    out.sort();
    Ok(out)
}
