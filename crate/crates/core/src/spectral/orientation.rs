use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{cap_check, Error, Result};
use crate::graph::{io::GraphJson, Graph};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A sign per edge of `base`; `+1` directs the edge from its lower to its
/// higher endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "OrientationJson", into = "OrientationJson")]
pub struct Orientation {
    base: Graph,
    signs: Vec<i8>,
}

impl Orientation {
    pub fn new(base: Graph, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != base.m() {
            return Err(Error::InvalidInput(format!(
                "{} signs for {} edges",
                signs.len(),
                base.m()
            )));
        }
        if let Some(&s) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::NonConforming(s as i64));
        }
        Ok(Self { base, signs })
    }

    pub fn all_positive(base: Graph) -> Self {
        let signs = vec![1; base.m()];
        Self { base, signs }
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn skew_integer_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.base.n();
        let mut s = vec![vec![0i64; n]; n];
        for (&(u, v), &sg) in self.base.edges().iter().zip(&self.signs) {
            s[u][v] = sg as i64;
            s[v][u] = -(sg as i64);
        }
        s
    }

    pub fn skew_matrix<T: Scalar>(&self) -> Matrix<T> {
        let n = self.base.n();
        let mut s = Matrix::zeros(n, n);
        for (&(u, v), &sg) in self.base.edges().iter().zip(&self.signs) {
            let x = if sg > 0 { T::one() } else { -T::one() };
            s[(u, v)] = x;
            s[(v, u)] = -x;
        }
        s
    }

    /// Reverses every edge at the vertices in `flip` (a switching).
    pub fn switched(&self, flip: &[bool]) -> Self {
        let signs = self
            .base
            .edges()
            .iter()
            .zip(&self.signs)
            .map(|(&(u, v), &s)| if flip[u] != flip[v] { -s } else { s })
            .collect();
        Self {
            base: self.base.clone(),
            signs,
        }
    }
}

fn bitstring(bits: impl Iterator<Item = bool>) -> String {
    bits.map(|b| if b { '1' } else { '0' }).collect()
}

#[derive(Clone, Serialize, Deserialize)]
struct OrientationJson {
    graph: GraphJson,
    /// `'1'` marks a reversed (sign −1) edge, co-tree edges in sorted order.
    cotree_signs: String,
    tree_edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tree_signs: Option<String>,
}

impl From<Orientation> for OrientationJson {
    fn from(o: Orientation) -> Self {
        let tree = o.base.spanning_forest();
        let in_tree = |e: &(usize, usize)| tree.binary_search(e).is_ok();
        let pairs: Vec<_> = o.base.edges().iter().zip(&o.signs).collect();
        let cotree_signs = bitstring(
            pairs
                .iter()
                .filter(|(e, _)| !in_tree(e))
                .map(|(_, &s)| s < 0),
        );
        let tree_bits: Vec<bool> = pairs
            .iter()
            .filter(|(e, _)| in_tree(e))
            .map(|(_, &s)| s < 0)
            .collect();
        let tree_signs = tree_bits
            .iter()
            .any(|&b| b)
            .then(|| bitstring(tree_bits.into_iter()));
        Self {
            graph: GraphJson::from(&o.base),
            cotree_signs,
            tree_edges: tree,
            tree_signs,
        }
    }
}

impl TryFrom<OrientationJson> for Orientation {
    type Error = Error;

    fn try_from(j: OrientationJson) -> Result<Self> {
        let base = Graph::try_from(j.graph)?;
        let mut tree = j.tree_edges;
        tree.iter_mut()
            .for_each(|e| *e = (e.0.min(e.1), e.0.max(e.1)));
        tree.sort_unstable();
        if let Some(e) = tree.iter().find(|e| base.edge_index(e.0, e.1).is_none()) {
            return Err(Error::InvalidInput(format!(
                "tree edge {e:?} is not an edge"
            )));
        }
        let parse = |s: &str| -> Result<Vec<bool>> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::InvalidInput(format!("bad sign character `{c}`"))),
                })
                .collect()
        };
        let cotree = parse(&j.cotree_signs)?;
        let tree_bits = match &j.tree_signs {
            Some(s) => parse(s)?,
            None => vec![false; tree.len()],
        };
        if cotree.len() + tree.len() != base.m() || tree_bits.len() != tree.len() {
            return Err(Error::InvalidInput(
                "sign strings do not match the edge count".into(),
            ));
        }
        let (mut ci, mut ti) = (0, 0);
        let signs = base
            .edges()
            .iter()
            .map(|e| {
                let neg = if tree.binary_search(e).is_ok() {
                    ti += 1;
                    tree_bits[ti - 1]
                } else {
                    ci += 1;
                    cotree[ci - 1]
                };
                if neg {
                    -1
                } else {
                    1
                }
            })
            .collect();
        Orientation::new(base, signs)
    }
}

/// Representatives with spanning-tree edges fixed to `+1`; pattern `p` sets
/// co-tree edge `i` (sorted order) to `-1` when bit `c-1-i` of `p` is set, so
/// numeric order of `p` is lexicographic order of the sign string.
#[derive(Clone, Debug)]
pub struct SwitchingClasses {
    base: Graph,
    tree_edges: Vec<(usize, usize)>,
    cotree: Vec<usize>,
}

impl SwitchingClasses {
    pub fn new(g: &Graph, caps: &Caps) -> Result<Self> {
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let tree_edges = g.spanning_forest();
        let cotree: Vec<usize> = (0..g.m())
            .filter(|&i| tree_edges.binary_search(&g.edges()[i]).is_err())
            .collect();
        cap_check(
            "co-tree edge count",
            cotree.len() as u128,
            caps.max_cotree.min(63) as u128,
        )?;
        Ok(Self {
            base: g.clone(),
            tree_edges,
            cotree,
        })
    }

    pub fn cotree_len(&self) -> usize {
        self.cotree.len()
    }

    pub fn count(&self) -> u64 {
        1 << self.cotree.len()
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    pub fn representative(&self, pattern: u64) -> Orientation {
        let c = self.cotree.len();
        let mut signs = vec![1i8; self.base.m()];
        for (i, &e) in self.cotree.iter().enumerate() {
            if pattern >> (c - 1 - i) & 1 == 1 {
                signs[e] = -1;
            }
        }
        Orientation {
            base: self.base.clone(),
            signs,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Orientation> + '_ {
        (0..self.count()).map(|p| self.representative(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_family, Family};

    #[test]
    fn class_counts() {
        let caps = Caps::default();
        let tree = Graph::new(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(SwitchingClasses::new(&tree, &caps).unwrap().count(), 1);
        let c4 = gen_family(&Family::Cycle { n: 4 }).unwrap();
        assert_eq!(SwitchingClasses::new(&c4, &caps).unwrap().count(), 2);
        let q3 = gen_family(&Family::Hypercube { d: 3 }).unwrap();
        assert_eq!(SwitchingClasses::new(&q3, &caps).unwrap().count(), 32);
        let two = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            SwitchingClasses::new(&two, &caps),
            Err(Error::Disconnected)
        ));
        let small = Caps {
            max_cotree: 4,
            ..Caps::default()
        };
        assert!(SwitchingClasses::new(&q3, &small).is_err());
    }

    #[test]
    fn json_round_trip() {
        let k4 = gen_family(&Family::Complete { n: 4 }).unwrap();
        let classes = SwitchingClasses::new(&k4, &Caps::default()).unwrap();
        let o = classes.representative(0b101);
        let s = serde_json::to_string(&o).unwrap();
        assert!(s.contains("\"cotree_signs\":\"101\""), "{s}");
        let back: Orientation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, o);

        let flipped = o.switched(&[true, false, false, false]);
        let s = serde_json::to_string(&flipped).unwrap();
        assert!(s.contains("tree_signs"));
        assert_eq!(serde_json::from_str::<Orientation>(&s).unwrap(), flipped);
    }

    #[test]
    fn rejects_bad_signs() {
        let k2 = gen_family(&Family::Complete { n: 2 }).unwrap();
        assert!(Orientation::new(k2.clone(), vec![0]).is_err());
        assert!(Orientation::new(k2, vec![1, 1]).is_err());
    }
}
