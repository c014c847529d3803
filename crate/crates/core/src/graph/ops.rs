use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{BitSet, Family, FamilyMeta, Graph};

/// For a line graph: vertex `i` of `L(G)` is root edge `root_edges[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeLabeling {
    pub root_edges: Vec<(usize, usize)>,
}

/// Line graph of `g`, with vertex `i` standing for the `i`-th sorted edge.
pub fn line_graph(g: &Graph) -> (Graph, EdgeLabeling) {
    let edges = g.edges().to_vec();
    // edges sharing an endpoint; simple graphs cannot share both
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, &(u, v)) in edges.iter().enumerate() {
        incident[u].push(i);
        incident[v].push(i);
    }
    let mut list = Vec::new();
    for inc in &incident {
        for (a, &i) in inc.iter().enumerate() {
            for &j in &inc[a + 1..] {
                list.push((i.min(j), i.max(j)));
            }
        }
    }
    list.sort_unstable();
    let lg = Graph::from_sorted_unchecked(edges.len(), list);
    let meta = FamilyMeta {
        family: Family::LineOf {
            root_n: g.n(),
            root_edges: edges.clone(),
        },
        vertex_transitive: None,
        edge_transitive: None,
        bipartite: Some(lg.is_bipartite()),
        regular_degree: lg.regular_degree(),
    };
    (lg.with_meta(meta), EdgeLabeling { root_edges: edges })
}

/// Result of deleting twins.
#[derive(Clone, Debug)]
pub struct TwinReduction {
    pub graph: Graph,
    /// Original vertex of each reduced vertex.
    pub kept: Vec<usize>,
    /// Reduced vertex representing each original vertex.
    pub image: Vec<usize>,
}

impl TwinReduction {
    /// `(deleted, kept)` pairs in original labels.
    pub fn deleted(&self) -> Vec<(usize, usize)> {
        self.image
            .iter()
            .enumerate()
            .filter(|&(v, &r)| self.kept[r] != v)
            .map(|(v, &r)| (v, self.kept[r]))
            .collect()
    }
}

/// Deletes twins (non-adjacent vertices with identical neighbourhoods) until
/// none remain, keeping the smallest label of each twin class.
///
/// Vertices with equal open neighbourhoods are automatically non-adjacent, and
/// deleting a twin never makes two other vertices twins, so one grouping pass
/// reaches the fixed point.
pub fn twin_reduce(g: &Graph) -> TwinReduction {
    let mut class_of: HashMap<&BitSet, usize> = HashMap::new();
    let mut kept = Vec::new();
    let mut image = vec![0; g.n()];
    for v in 0..g.n() {
        let next = kept.len();
        let r = *class_of.entry(g.neighbors(v)).or_insert(next);
        if r == next {
            kept.push(v);
        }
        image[v] = r;
    }
    let mut graph = g.induced_subgraph(&kept);
    if kept.len() == g.n() {
        if let Some(m) = g.meta() {
            graph = graph.with_meta(m.clone());
        }
    }
    TwinReduction { graph, kept, image }
}

/// Rank of the adjacency matrix over F2.
pub fn f2_rank(g: &Graph) -> usize {
    let mut rows: Vec<BitSet> = (0..g.n()).map(|v| g.neighbors(v).clone()).collect();
    let mut rank = 0;
    for col in 0..g.n() {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].contains(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.contains(col) {
                row.xor_with(&pivot);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{are_isomorphic, gen_family};

    fn fig2_tree() -> Graph {
        // hubs 0,1; pendants 2,3 on hub 0 and 4,5 on hub 1
        Graph::new(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).unwrap()
    }

    #[test]
    fn line_graph_examples() {
        let k5 = gen_family(&Family::Complete { n: 5 }).unwrap();
        let (l, lab) = line_graph(&k5);
        assert_eq!((l.n(), l.m()), (10, 30));
        assert_eq!(lab.root_edges.len(), 10);
        let j52 = gen_family(&Family::Johnson { n: 5, k: 2 }).unwrap();
        assert!(are_isomorphic(&l, &j52));

        let p6 = gen_family(&Family::Path { n: 6 }).unwrap();
        let p5 = gen_family(&Family::Path { n: 5 }).unwrap();
        assert!(are_isomorphic(&line_graph(&p6).0, &p5));

        let c4 = gen_family(&Family::Cycle { n: 4 }).unwrap();
        assert!(are_isomorphic(&line_graph(&c4).0, &c4));
    }

    #[test]
    fn twin_examples() {
        let t = twin_reduce(&fig2_tree());
        let p4 = gen_family(&Family::Path { n: 4 }).unwrap();
        assert!(are_isomorphic(&t.graph, &p4));
        assert_eq!(t.deleted(), vec![(3, 2), (5, 4)]);

        let k5 = gen_family(&Family::Complete { n: 5 }).unwrap();
        assert_eq!(twin_reduce(&k5).graph, k5);

        let e3 = Graph::edgeless(3);
        let r = twin_reduce(&e3);
        assert_eq!(r.graph.n(), 1);
        assert_eq!(r.image, vec![0, 0, 0]);
    }

    #[test]
    fn f2_rank_examples() {
        let k = |n| gen_family(&Family::Complete { n }).unwrap();
        assert_eq!(f2_rank(&k(3)), 2);
        assert_eq!(f2_rank(&k(4)), 4);
        assert_eq!(f2_rank(&Graph::edgeless(5)), 0);
        assert_eq!(f2_rank(&gen_family(&Family::Path { n: 4 }).unwrap()), 4);
    }
}
