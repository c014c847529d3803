//! Family generators.
//!
//! Labeling conventions:
//! - cycle / path: `i ~ i+1` (cycle closes `n-1 ~ 0`);
//! - complete bipartite `K_{r,s}`: left side `0..r`, right side `r..r+s`;
//! - hypercube: binary strings read as integers;
//! - Johnson / merged Johnson: colex rank of the k-subset;
//! - rook `r×s`: square `(i, j)` is `i*s + j`.

use super::{ops::line_graph, Family, FamilyMeta, Graph};
use crate::error::{Error, Result};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// All k-subsets of `0..n` in colex order.
pub(crate) fn k_subsets_colex(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    // colex successor: increment the lowest element that can move up
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = 0;
        while i < k {
            let limit = if i + 1 < k { cur[i + 1] } else { n };
            if cur[i] + 1 < limit {
                break;
            }
            i += 1;
        }
        if i == k {
            break;
        }
        cur[i] += 1;
        for (j, c) in cur.iter_mut().enumerate().take(i) {
            *c = j;
        }
    }
    out
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// The intersection-size set `L` for which the degree-`k` Majorana monomials
/// form `J(n, k, L)`: odd sizes below `k` for even `k`, even sizes for odd `k`.
pub fn merged_johnson_l_set(k: usize) -> Vec<usize> {
    (0..k).filter(|i| (i % 2 == 1) == (k % 2 == 0)).collect()
}

fn merged_johnson(n: usize, k: usize, l: &[usize]) -> Graph {
    let subsets = k_subsets_colex(n, k);
    Graph::from_adjacency(subsets.len(), |a, b| {
        l.contains(&sorted_intersection_len(&subsets[a], &subsets[b]))
    })
}

fn meta(g: &Graph, family: Family, vt: Option<bool>, et: Option<bool>) -> FamilyMeta {
    FamilyMeta {
        family,
        vertex_transitive: vt,
        edge_transitive: et,
        bipartite: Some(g.is_bipartite()),
        regular_degree: g.regular_degree(),
    }
}

/// Generates a member of a parameterized family with its metadata.
pub fn gen_family(family: &Family) -> Result<Graph> {
    let (g, vt, et) = match family {
        Family::Cycle { n } => {
            let n = *n;
            if n < 3 {
                return Err(invalid(format!("cycle needs n >= 3, got {n}")));
            }
            let g = Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))?;
            (g, Some(true), Some(true))
        }
        Family::Path { n } => {
            let n = *n;
            if n < 1 {
                return Err(invalid("path needs n >= 1"));
            }
            let g = Graph::new(n, (1..n).map(|i| (i - 1, i)))?;
            (g, Some(n <= 2), Some(n <= 3))
        }
        Family::Complete { n } => {
            if *n < 1 {
                return Err(invalid("complete graph needs n >= 1"));
            }
            (
                Graph::from_adjacency(*n, |_, _| true),
                Some(true),
                Some(true),
            )
        }
        Family::CompleteBipartite { r, s } => {
            let (r, s) = (*r, *s);
            if r < 1 || s < 1 {
                return Err(invalid(format!(
                    "complete bipartite needs r, s >= 1, got r={r}, s={s}"
                )));
            }
            let g = Graph::from_adjacency(r + s, |u, v| (u < r) != (v < r));
            (g, Some(r == s), Some(true))
        }
        Family::Hypercube { d } => {
            let d = *d;
            if d < 1 || d > 20 {
                return Err(invalid(format!("hypercube needs 1 <= d <= 20, got {d}")));
            }
            let g = Graph::from_adjacency(1 << d, |u, v| (u ^ v).count_ones() == 1);
            (g, Some(true), Some(true))
        }
        Family::Johnson { n, k } => {
            let (n, k) = (*n, *k);
            if !(n >= k && k >= 1) {
                return Err(invalid(format!(
                    "johnson needs n >= k >= 1, got n={n}, k={k}"
                )));
            }
            (merged_johnson(n, k, &[k - 1]), Some(true), Some(true))
        }
        Family::MergedJohnson { n, k, l } => {
            let (n, k) = (*n, *k);
            if !(n >= k && k >= 1) {
                return Err(invalid(format!(
                    "merged-johnson needs n >= k >= 1, got n={n}, k={k}"
                )));
            }
            if let Some(bad) = l.iter().find(|&&i| i >= k) {
                return Err(invalid(format!(
                    "merged-johnson L must be a subset of {{0..{}}}, found {bad}",
                    k - 1
                )));
            }
            let mut l = l.clone();
            l.sort_unstable();
            l.dedup();
            let g = merged_johnson(n, k, &l);
            // S_n is transitive on pairs with a fixed intersection size; with
            // several realizable sizes only a complete graph is guaranteed.
            let lo = (2 * k).saturating_sub(n);
            let realizable = l.iter().filter(|&&i| i >= lo).count();
            let complete = g.m() == g.n() * g.n().saturating_sub(1) / 2;
            let et = (realizable <= 1 || complete).then_some(true);
            (g, Some(true), et)
        }
        Family::Rook { r, s } => {
            let (r, s) = (*r, *s);
            if r < 1 || s < 1 {
                return Err(invalid(format!("rook needs r, s >= 1, got r={r}, s={s}")));
            }
            let g = Graph::from_adjacency(r * s, |a, b| a / s == b / s || a % s == b % s);
            (g, Some(true), Some(r == s || r == 1 || s == 1))
        }
        Family::LineOf { root_n, root_edges } => {
            let root = Graph::new(*root_n, root_edges.iter().copied())?;
            return Ok(line_graph(&root).0);
        }
        Family::Custom => {
            return Err(invalid(
                "custom graphs are built from an edge list, not generated",
            ));
        }
    };
    let meta = meta(&g, family.clone(), vt, et);
    Ok(g.with_meta(meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_order() {
        let s = k_subsets_colex(4, 2);
        assert_eq!(
            s,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 3],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(k_subsets_colex(6, 3).len(), 20);
        assert_eq!(k_subsets_colex(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn family_sizes() {
        let k5 = gen_family(&Family::Complete { n: 5 }).unwrap();
        assert_eq!((k5.n(), k5.m()), (5, 10));

        let mj = gen_family(&Family::MergedJohnson {
            n: 6,
            k: 2,
            l: vec![1],
        })
        .unwrap();
        assert_eq!(mj.n(), 15);
        assert_eq!(mj.regular_degree(), Some(2 * (6 - 2)));

        let q3 = gen_family(&Family::Hypercube { d: 3 }).unwrap();
        assert_eq!((q3.n(), q3.m()), (8, 3 * 4));
        assert_eq!(q3.meta().unwrap().bipartite, Some(true));

        let rook = gen_family(&Family::Rook { r: 2, s: 3 }).unwrap();
        assert_eq!(rook.regular_degree(), Some(2 + 3 - 2));
    }

    #[test]
    fn invalid_parameters_name_constraint() {
        let e = gen_family(&Family::Cycle { n: 2 }).unwrap_err().to_string();
        assert!(e.contains("n >= 3"), "{e}");
        let e = gen_family(&Family::MergedJohnson {
            n: 6,
            k: 2,
            l: vec![2],
        })
        .unwrap_err()
        .to_string();
        assert!(e.contains("subset"), "{e}");
        assert!(gen_family(&Family::Johnson { n: 2, k: 3 }).is_err());
        assert!(gen_family(&Family::Custom).is_err());
    }

    #[test]
    fn l_sets() {
        assert_eq!(merged_johnson_l_set(2), vec![1]);
        assert_eq!(merged_johnson_l_set(3), vec![0, 2]);
        assert_eq!(merged_johnson_l_set(4), vec![1, 3]);
    }

    #[test]
    fn path_flags() {
        for (n, vt, et) in [
            (1, true, true),
            (2, true, true),
            (3, false, true),
            (4, false, false),
        ] {
            let m = gen_family(&Family::Path { n })
                .unwrap()
                .meta()
                .cloned()
                .unwrap();
            assert_eq!(
                (m.vertex_transitive, m.edge_transitive),
                (Some(vt), Some(et)),
                "P_{n}"
            );
        }
    }
}
