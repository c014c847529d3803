//! Simple undirected graphs on vertices `0..n`, family generators and the
//! structural operations used by the bound machinery.

mod bitset;
mod generators;
pub mod io;
mod ops;
mod symmetry;

use serde::{Deserialize, Serialize};

pub use bitset::BitSet;
pub(crate) use generators::k_subsets_colex;
pub use generators::{gen_family, merged_johnson_l_set};
pub use ops::{f2_rank, line_graph, twin_reduce, EdgeLabeling, TwinReduction};
pub use symmetry::{
    are_isomorphic, check_transitivity, find_isomorphism, Transitivity, DEFAULT_TRANSITIVITY_CAP,
};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Graph family tag with its integer parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Cycle {
        n: usize,
    },
    Path {
        n: usize,
    },
    Complete {
        n: usize,
    },
    CompleteBipartite {
        r: usize,
        s: usize,
    },
    Hypercube {
        d: usize,
    },
    Johnson {
        n: usize,
        k: usize,
    },
    MergedJohnson {
        n: usize,
        k: usize,
        l: Vec<usize>,
    },
    Rook {
        r: usize,
        s: usize,
    },
    LineOf {
        root_n: usize,
        root_edges: Vec<(usize, usize)>,
    },
    Custom,
}

/// Family tag plus structural flags. Transitivity flags are `Some` only when
/// the generator guarantees them or the brute-force checker computed them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMeta {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_transitive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_transitive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bipartite: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular_degree: Option<usize>,
}

impl FamilyMeta {
    pub fn custom() -> Self {
        Self {
            family: Family::Custom,
            vertex_transitive: None,
            edge_transitive: None,
            bipartite: None,
            regular_degree: None,
        }
    }
}

/// Undirected simple graph. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<BitSet>,
    meta: Option<FamilyMeta>,
}

impl PartialEq for Graph {
    /// Labeled equality: same vertex count and edge set (metadata ignored).
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from an edge list. Endpoint order and edge order are
    /// normalized; self-loops, duplicates and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u},{v}) has an endpoint >= n = {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!(
                "duplicate edge ({},{})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted_unchecked(n, list))
    }

    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![BitSet::new(n); n];
        for &(u, v) in &edges {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Self {
            n,
            edges,
            adj,
            meta: None,
        }
    }

    /// Builds from a symmetric adjacency predicate.
    pub fn from_adjacency(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if adjacent(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Self::from_sorted_unchecked(n, edges)
    }

    pub fn edgeless(n: usize) -> Self {
        Self::from_sorted_unchecked(n, Vec::new())
    }

    pub fn with_meta(mut self, meta: FamilyMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn without_meta(mut self) -> Self {
        self.meta = None;
        self
    }

    pub fn meta(&self) -> Option<&FamilyMeta> {
        self.meta.as_ref()
    }

    pub fn family(&self) -> &Family {
        self.meta.as_ref().map_or(&Family::Custom, |m| &m.family)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn neighbor_iter(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter()
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Common degree when the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Position of edge `{u,v}` in the sorted edge list.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn adjacency_matrix<T: Scalar>(&self) -> Matrix<T> {
        let mut a = Matrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = T::one();
            a[(v, u)] = T::one();
        }
        a
    }

    pub fn complement(&self) -> Graph {
        Graph::from_adjacency(self.n, |u, v| !self.has_edge(u, v))
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        Graph::from_adjacency(vertices.len(), |i, j| {
            self.has_edge(vertices[i], vertices[j])
        })
    }

    /// Graph with vertex `v` removed (later vertices shift down by one).
    pub fn remove_vertex(&self, v: usize) -> Graph {
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced_subgraph(&keep)
    }

    /// Cartesian product; vertex `(i, j)` is labeled `i * h.n() + j`.
    pub fn cartesian_product(&self, h: &Graph) -> Graph {
        let k = h.n;
        Graph::from_adjacency(self.n * k, |a, b| {
            let (i1, j1) = (a / k, a % k);
            let (i2, j2) = (b / k, b % k);
            (i1 == i2 && h.has_edge(j1, j2)) || (j1 == j2 && self.has_edge(i1, i2))
        })
    }

    /// Two-coloring (side per vertex) if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let su = side[u].unwrap();
                for w in self.neighbor_iter(u) {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            stack.push(w);
                        }
                        Some(sw) if sw == su => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap_or(false)).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for w in self.neighbor_iter(u) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.connected_components().len() == 1
    }

    /// Spanning forest edges (BFS from each component's smallest vertex).
    pub fn spanning_forest(&self) -> Vec<(usize, usize)> {
        let mut seen = vec![false; self.n];
        let mut tree = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbor_iter(u) {
                    if !seen[w] {
                        seen[w] = true;
                        tree.push((u.min(w), u.max(w)));
                        queue.push_back(w);
                    }
                }
            }
        }
        tree.sort_unstable();
        tree
    }
}
