use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::clique::{clique_number, independence_number, maximal_independent_sets};
use crate::config::Caps;
use crate::error::{cap_check, Error, Result};
use crate::graph::Graph;
use crate::sdp::{self, BlockKind, Entry, SdpOptions, SdpProblem};

fn greedy_color_count(g: &Graph) -> usize {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut color = vec![usize::MAX; g.n()];
    let mut used = 0;
    for v in order {
        let c = (0..)
            .find(|&c| g.neighbor_iter(v).all(|u| color[u] != c))
            .unwrap();
        color[v] = c;
        used = used.max(c + 1);
    }
    used
}

/// DSATUR backtracking: can `g` be properly coloured with `k` colours?
fn colorable(g: &Graph, k: usize) -> bool {
    fn go(g: &Graph, k: usize, color: &mut [usize], colored: usize, used: usize) -> bool {
        let n = g.n();
        if colored == n {
            return true;
        }
        // uncoloured vertex with most distinct neighbour colours, then highest degree
        let mut best = None;
        let mut best_key = (0, 0);
        for v in 0..n {
            if color[v] != usize::MAX {
                continue;
            }
            let mut seen = 0u64;
            for u in g.neighbor_iter(v) {
                if color[u] != usize::MAX {
                    seen |= 1 << color[u];
                }
            }
            let key = (seen.count_ones() as usize + 1, g.degree(v) + 1);
            if key > best_key {
                best_key = key;
                best = Some(v);
            }
        }
        let v = best.unwrap();
        // a fresh colour is interchangeable with any other fresh one
        for c in 0..k.min(used + 1) {
            if g.neighbor_iter(v).all(|u| color[u] != c) {
                color[v] = c;
                if go(g, k, color, colored + 1, used.max(c + 1)) {
                    return true;
                }
                color[v] = usize::MAX;
            }
        }
        false
    }
    let mut color = vec![usize::MAX; g.n()];
    go(g, k, &mut color, 0, 0)
}

/// Exact chromatic number, deepening from ω up to the greedy bound.
pub fn chromatic_number(g: &Graph, caps: &Caps) -> Result<usize> {
    cap_check(
        "vertex count for exact colouring",
        g.n() as u128,
        caps.max_exact_vertices as u128,
    )?;
    if g.n() == 0 {
        return Ok(0);
    }
    let lo = clique_number(g, caps)?;
    let hi = greedy_color_count(g);
    Ok((lo..hi).find(|&k| colorable(g, k)).unwrap_or(hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FractionalMethod {
    /// `|V| / α` on a vertex-transitive graph.
    VertexTransitive,
    /// Covering LP over maximal independent sets.
    LinearProgram,
}

/// An `a:b` colouring: vertex `v` gets the `b` colours in `sets[v]` out of `0..a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorAssignment {
    pub a: usize,
    pub b: usize,
    pub sets: Vec<Vec<usize>>,
}

impl ColorAssignment {
    /// Exact check: `b` distinct colours below `a` per vertex, disjoint on edges.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.sets.len() == g.n()
            && self.sets.iter().all(|s| {
                s.len() == self.b
                    && s.iter().all(|&c| c < self.a)
                    && s.windows(2).all(|w| w[0] < w[1])
            })
            && g.edges().iter().all(|&(u, v)| {
                self.sets[u]
                    .iter()
                    .all(|c| self.sets[v].binary_search(c).is_err())
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FractionalColoring {
    /// Exact `χ_f` when known (vertex-transitive formula or verified colouring).
    pub exact: Option<Ratio<u64>>,
    /// A value `≥ χ_f`, safe for deriving lower bounds on η.
    pub upper: f64,
    /// Best numerical estimate of `χ_f`.
    pub value: f64,
    /// Whether an explicit colouring achieving `exact` was checked.
    pub verified: bool,
    pub coloring: Option<ColorAssignment>,
    pub method: FractionalMethod,
}

/// Continued-fraction convergent of `x` within `tol`, denominator at most `max_den`.
pub fn rationalize(x: f64, tol: f64, max_den: u64) -> Option<Ratio<u64>> {
    if !(x >= 0.0) || !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > u32::MAX as f64 {
            return None;
        }
        let a = a as u64;
        let h = a.checked_mul(h1)?.checked_add(h0)?;
        let k = a.checked_mul(k1)?.checked_add(k0)?;
        if k > max_den {
            return None;
        }
        if (h as f64 / k as f64 - x).abs() <= tol {
            return Some(Ratio::new(h, k));
        }
        (h0, h1, k0, k1) = (h1, h, k1, k);
        let frac = r - a as f64;
        if frac < 1e-15 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

/// Turns a multiset of independent sets (`mult[i]` copies of `sets[i]`) covering
/// every vertex at least `b` times into an `a:b` colouring.
fn assignment_from_cover(
    n: usize,
    sets: &[Vec<usize>],
    mult: &[usize],
    b: usize,
) -> ColorAssignment {
    let mut per_vertex = vec![Vec::new(); n];
    let mut color = 0;
    for (s, &m) in sets.iter().zip(mult) {
        for _ in 0..m {
            for &v in s {
                if per_vertex[v].len() < b {
                    per_vertex[v].push(color);
                }
            }
            color += 1;
        }
    }
    ColorAssignment {
        a: color,
        b,
        sets: per_vertex,
    }
}

const COVER_SEARCH_NODES: usize = 2_000_000;

/// Searches multiplicities `y` with `Σ y = a` and every vertex covered `b` times.
fn find_cover(n: usize, sets: &[Vec<usize>], a: usize, b: usize) -> Option<Vec<usize>> {
    // last set index containing each vertex, for the reachability prune
    let mut last = vec![None; n];
    for (i, s) in sets.iter().enumerate() {
        for &v in s {
            last[v] = Some(i);
        }
    }
    if last.iter().any(Option::is_none) {
        return None;
    }
    let max_size = sets.iter().map(Vec::len).max().unwrap_or(0);
    struct Search<'a> {
        sets: &'a [Vec<usize>],
        last: &'a [Option<usize>],
        max_size: usize,
        nodes: usize,
    }
    impl Search<'_> {
        fn go(
            &mut self,
            i: usize,
            budget: usize,
            deficit: &mut [usize],
            mult: &mut Vec<usize>,
        ) -> bool {
            self.nodes += 1;
            if self.nodes > COVER_SEARCH_NODES {
                return false;
            }
            let total: usize = deficit.iter().sum();
            if total == 0 {
                return true;
            }
            if i == self.sets.len() || total > budget * self.max_size {
                return false;
            }
            if deficit
                .iter()
                .enumerate()
                .any(|(v, &d)| d > budget || (d > 0 && self.last[v].unwrap() < i))
            {
                return false;
            }
            let useful = self.sets[i].iter().map(|&v| deficit[v]).max().unwrap_or(0);
            let saved = deficit.to_vec();
            for m in (0..=useful.min(budget)).rev() {
                for &v in &self.sets[i] {
                    deficit[v] = saved[v].saturating_sub(m);
                }
                mult[i] = m;
                if self.go(i + 1, budget - m, deficit, mult) {
                    return true;
                }
                if self.nodes > COVER_SEARCH_NODES {
                    break;
                }
            }
            mult[i] = 0;
            deficit.copy_from_slice(&saved);
            false
        }
    }
    let mut search = Search {
        sets,
        last: &last,
        max_size,
        nodes: 0,
    };
    let mut deficit = vec![b; n];
    let mut mult = vec![0; sets.len()];
    search.go(0, a, &mut deficit, &mut mult).then_some(mult)
}

/// Largest vertex count for which a claimed ratio is verified by explicit search.
pub const MAX_VERIFY_VERTICES: usize = 20;

/// Covering LP `min Σ x_I` over maximal independent sets `I`, solved with the
/// SDP engine on `1×1` blocks.
fn covering_lp(n: usize, sets: &[Vec<usize>], caps: &Caps) -> Result<Vec<f64>> {
    let mut p = SdpProblem::<f64>::new();
    let xs: Vec<usize> = sets
        .iter()
        .map(|_| p.add_block(1, BlockKind::Real))
        .collect();
    let slack: Vec<usize> = (0..n).map(|_| p.add_block(1, BlockKind::Real)).collect();
    for &b in &xs {
        p.add_objective(Entry::real(b, 0, 0, 1.0));
    }
    for v in 0..n {
        let mut row: Vec<Entry<f64>> = sets
            .iter()
            .zip(&xs)
            .filter(|(s, _)| s.contains(&v))
            .map(|(_, &b)| Entry::real(b, 0, 0, 1.0))
            .collect();
        row.push(Entry::real(slack[v], 0, 0, -1.0));
        p.add_constraint(row, 1.0);
    }
    let sol = sdp::solve(&p, &SdpOptions::default(), caps)?.require_optimal()?;
    Ok(xs
        .iter()
        .map(|&b| sol.x[b].as_real().map_or(0.0, |m| m[(0, 0)]).max(0.0))
        .collect())
}

/// Rounds up an approximately feasible cover so every vertex is covered once;
/// the returned total is a sound upper bound on `χ_f`.
fn repaired_total(n: usize, sets: &[Vec<usize>], x: &[f64]) -> f64 {
    let mut cover = vec![0.0; n];
    for (s, &xi) in sets.iter().zip(x) {
        s.iter().for_each(|&v| cover[v] += xi);
    }
    let total: f64 = x.iter().sum();
    let deficit: f64 = cover.iter().map(|c| (1.0 - c).max(0.0)).sum();
    (total + deficit) * (1.0 + 4.0 * f64::EPSILON * n as f64)
}

fn try_verify(g: &Graph, sets: &[Vec<usize>], r: Ratio<u64>) -> Option<ColorAssignment> {
    for k in 1..=4u64 {
        let (a, b) = ((*r.numer() * k) as usize, (*r.denom() * k) as usize);
        if let Some(mult) = find_cover(g.n(), sets, a, b) {
            // unused colours are allowed, so the palette is `a` even if fewer were needed
            let c = ColorAssignment {
                a,
                ..assignment_from_cover(g.n(), sets, &mult, b)
            };
            if c.is_valid_for(g) {
                return Some(c);
            }
        }
    }
    None
}

/// Fractional chromatic number with an exactness certificate where possible.
pub fn fractional_chromatic(g: &Graph, caps: &Caps) -> Result<FractionalColoring> {
    let n = g.n();
    if n == 0 {
        return Ok(FractionalColoring {
            exact: Some(Ratio::from_integer(0)),
            upper: 0.0,
            value: 0.0,
            verified: true,
            coloring: Some(ColorAssignment {
                a: 0,
                b: 1,
                sets: vec![],
            }),
            method: FractionalMethod::LinearProgram,
        });
    }
    let vt = g.meta().and_then(|m| m.vertex_transitive) == Some(true);
    if vt {
        let alpha = independence_number(g, caps)?;
        let r = Ratio::new(n as u64, alpha as u64);
        let coloring = if n <= MAX_VERIFY_VERTICES && n <= caps.max_mis_vertices {
            try_verify(g, &maximal_independent_sets(g, caps)?, r)
        } else {
            None
        };
        let value = n as f64 / alpha as f64;
        return Ok(FractionalColoring {
            exact: Some(r),
            upper: value,
            value,
            verified: coloring.is_some(),
            coloring,
            method: FractionalMethod::VertexTransitive,
        });
    }
    if n > caps.max_mis_vertices {
        return Err(Error::CapExceeded {
            what: "vertex count for independent-set enumeration (graph not vertex-transitive)",
            value: n as u128,
            cap: caps.max_mis_vertices as u128,
        });
    }
    let sets = maximal_independent_sets(g, caps)?;
    let x = covering_lp(n, &sets, caps)?;
    let upper = repaired_total(n, &sets, &x);
    let value: f64 = x.iter().sum();
    let candidate = rationalize(value, 1e-6 * value.max(1.0), 1000);
    let coloring = match candidate {
        Some(r) if n <= MAX_VERIFY_VERTICES => try_verify(g, &sets, r),
        _ => None,
    };
    Ok(match coloring {
        Some(c) => {
            let r = Ratio::new(c.a as u64, c.b as u64);
            FractionalColoring {
                exact: Some(r),
                upper: c.a as f64 / c.b as f64,
                value: c.a as f64 / c.b as f64,
                verified: true,
                coloring: Some(c),
                method: FractionalMethod::LinearProgram,
            }
        }
        None => FractionalColoring {
            exact: None,
            upper,
            value,
            verified: false,
            coloring: None,
            method: FractionalMethod::LinearProgram,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_family, Family};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn chromatic_examples() {
        let c5 = gen_family(&Family::Cycle { n: 5 }).unwrap();
        assert_eq!(chromatic_number(&c5, &caps()).unwrap(), 3);
        for n in 1..7 {
            let k = gen_family(&Family::Complete { n }).unwrap();
            assert_eq!(chromatic_number(&k, &caps()).unwrap(), n);
        }
        let q3 = gen_family(&Family::Hypercube { d: 3 }).unwrap();
        assert_eq!(chromatic_number(&q3, &caps()).unwrap(), 2);
        assert_eq!(chromatic_number(&Graph::edgeless(3), &caps()).unwrap(), 1);
        // Petersen-like: J(5,2) complement has χ = 3
        let k = gen_family(&Family::Johnson { n: 5, k: 2 }).unwrap();
        assert_eq!(chromatic_number(&k.complement(), &caps()).unwrap(), 3);
    }

    #[test]
    fn rationalize_convergents() {
        assert_eq!(rationalize(2.5000000003, 1e-6, 100), Some(Ratio::new(5, 2)));
        assert_eq!(rationalize(3.0, 1e-9, 100), Some(Ratio::new(3, 1)));
        assert_eq!(rationalize(7.0 / 3.0, 1e-9, 100), Some(Ratio::new(7, 3)));
        assert_eq!(rationalize(std::f64::consts::PI, 1e-12, 100), None);
    }

    #[test]
    fn c5_has_a_verified_five_two_colouring() {
        let c5 = gen_family(&Family::Cycle { n: 5 }).unwrap();
        let f = fractional_chromatic(&c5, &caps()).unwrap();
        assert_eq!(f.exact, Some(Ratio::new(5, 2)));
        assert!(f.verified);
        let c = f.coloring.unwrap();
        assert_eq!((c.a, c.b), (5, 2));
        assert!(c.is_valid_for(&c5));

        // without metadata the LP path must reach the same certificate
        let bare = c5.without_meta();
        let f = fractional_chromatic(&bare, &caps()).unwrap();
        assert_eq!(f.method, FractionalMethod::LinearProgram);
        assert_eq!(f.exact, Some(Ratio::new(5, 2)));
        assert!(f.verified);
    }

    #[test]
    fn lp_path_on_non_transitive_graphs() {
        let paw = Graph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        let f = fractional_chromatic(&paw, &caps()).unwrap();
        assert_eq!(f.exact, Some(Ratio::from_integer(3)));
        let p4 = gen_family(&Family::Path { n: 4 }).unwrap();
        let f = fractional_chromatic(&p4, &caps()).unwrap();
        assert_eq!(f.exact, Some(Ratio::from_integer(2)));
        assert!(f.verified);
    }

    #[test]
    fn transitive_examples() {
        let k = gen_family(&Family::Complete { n: 6 }).unwrap();
        assert_eq!(
            fractional_chromatic(&k, &caps()).unwrap().exact,
            Some(Ratio::from_integer(6))
        );
        let c7 = gen_family(&Family::Cycle { n: 7 }).unwrap();
        let f = fractional_chromatic(&c7, &caps()).unwrap();
        assert_eq!(f.exact, Some(Ratio::new(7, 3)));
        assert!(f.verified);
        let j = gen_family(&Family::MergedJohnson {
            n: 4,
            k: 2,
            l: vec![1],
        })
        .unwrap();
        assert_eq!(
            fractional_chromatic(&j, &caps()).unwrap().exact,
            Some(Ratio::from_integer(3))
        );
    }

    #[test]
    fn invalid_assignment_is_rejected() {
        let k2 = gen_family(&Family::Complete { n: 2 }).unwrap();
        let bad = ColorAssignment {
            a: 2,
            b: 1,
            sets: vec![vec![0], vec![0]],
        };
        assert!(!bad.is_valid_for(&k2));
    }
}
