use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Orientation, SwitchingClasses};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Which combinatorial-matrix identities hold for an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub rows: usize,
    pub cols: usize,
    /// `k` when the matrix is square with `MᵀM = k·I`, `k ≥ 1`.
    pub weighing: Option<i64>,
    pub conference: bool,
    pub skew_conference: bool,
    pub hadamard: bool,
    pub partial_hadamard: bool,
    /// `M Mᵀ`.
    pub row_gram: Vec<Vec<i64>>,
    /// `Mᵀ M`.
    pub col_gram: Vec<Vec<i64>>,
}

fn gram(a: &[Vec<i64>], rows: usize, cols: usize, by_rows: bool) -> Vec<Vec<i64>> {
    let k = if by_rows { rows } else { cols };
    let mut g = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in i..k {
            let s: i64 = if by_rows {
                (0..cols).map(|t| a[i][t] * a[j][t]).sum()
            } else {
                (0..rows).map(|t| a[t][i] * a[t][j]).sum()
            };
            g[i][j] = s;
            g[j][i] = s;
        }
    }
    g
}

fn scalar_multiple_of_identity(g: &[Vec<i64>]) -> Option<i64> {
    let c = g.first().map_or(0, |r| r[0]);
    g.iter()
        .enumerate()
        .all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, &x)| x == if i == j { c } else { 0 })
        })
        .then_some(c)
}

/// Exact checks on a `{0, ±1}` matrix given as rows.
pub fn matrix_certificates(m: &[Vec<i64>]) -> Result<CertificateReport> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("ragged matrix".into()));
    }
    if let Some(&x) = m.iter().flatten().find(|&&x| !(-1..=1).contains(&x)) {
        return Err(Error::NonConforming(x));
    }
    let row_gram = gram(m, rows, cols, true);
    let col_gram = gram(m, rows, cols, false);
    let square = rows == cols && rows > 0;
    let signs_only = m.iter().flatten().all(|&x| x != 0);
    let row_mult = scalar_multiple_of_identity(&row_gram);
    let col_mult = scalar_multiple_of_identity(&col_gram);

    let weighing = if square {
        col_mult.filter(|&k| k >= 1)
    } else {
        None
    };
    let zero_diag_signs =
        square && (0..rows).all(|i| (0..cols).all(|j| (m[i][j] == 0) == (i == j)));
    let conference = zero_diag_signs && row_mult == Some(rows as i64 - 1);
    let skew = square && (0..rows).all(|i| (0..cols).all(|j| m[i][j] == -m[j][i]));
    Ok(CertificateReport {
        rows,
        cols,
        weighing,
        conference,
        skew_conference: conference && skew,
        hadamard: square && signs_only && row_mult == Some(rows as i64),
        partial_hadamard: rows > 0 && signs_only && row_mult == Some(cols as i64),
        row_gram,
        col_gram,
    })
}

fn is_weighing(s: &[Vec<i64>], k: i64) -> bool {
    let n = s.len();
    for i in 0..n {
        if s[i].iter().map(|x| x * x).sum::<i64>() != k {
            return false;
        }
        for j in i + 1..n {
            if (0..n).map(|t| s[i][t] * s[j][t]).sum::<i64>() != 0 {
                return false;
            }
        }
    }
    true
}

/// Smallest-pattern switching representative whose skew matrix satisfies
/// `SᵀS = k·I`, exhausting all classes.
pub fn find_weighing_orientation(g: &Graph, k: usize, caps: &Caps) -> Result<Option<Orientation>> {
    let classes = SwitchingClasses::new(g, caps)?;
    let count = classes.count() as usize;
    let hit = (0..count).into_par_iter().position_first(|p| {
        is_weighing(
            &classes.representative(p as u64).skew_integer_matrix(),
            k as i64,
        )
    });
    Ok(hit.map(|p| classes.representative(p as u64)))
}

/// Whether a skew-conference matrix of order `n` exists; `None` when the
/// exhaustive search is beyond `caps`.
pub fn skew_conference_exists(n: usize, caps: &Caps) -> Option<bool> {
    if n <= 2 {
        return Some(true);
    }
    // S + I would be a skew-Hadamard matrix, forcing 4 | n
    if n % 4 != 0 {
        return Some(false);
    }
    let kn = Graph::from_adjacency(n, |_, _| true);
    find_weighing_orientation(&kn, n - 1, caps)
        .ok()
        .map(|o| o.is_some())
}

/// Largest `s` for which the partial-Hadamard search runs.
pub const MAX_PARTIAL_HADAMARD_COLS: usize = 16;

/// Whether an `r×s` `±1` matrix with pairwise orthogonal rows exists; `None`
/// above the search limit.
pub fn exists_partial_hadamard(r: usize, s: usize) -> Option<bool> {
    if r <= 1 {
        return Some(r == 0 || s >= 1);
    }
    if r > s || s % 2 == 1 || (r >= 3 && s % 4 != 0) {
        return Some(false);
    }
    if s > MAX_PARTIAL_HADAMARD_COLS {
        return None;
    }
    // first row all ones, other rows normalized to start with +1
    let candidates: Vec<u32> = (0..1u32 << (s - 1))
        .filter(|&bits| 2 * bits.count_ones() as usize == s)
        .collect();
    let orthogonal = |a: u32, b: u32| 2 * (a ^ b).count_ones() as usize == s;
    fn extend(
        chosen: &mut Vec<u32>,
        start: usize,
        need: usize,
        c: &[u32],
        orth: &dyn Fn(u32, u32) -> bool,
    ) -> bool {
        if need == 0 {
            return true;
        }
        for i in start..c.len() {
            if chosen.iter().all(|&x| orth(x, c[i])) {
                chosen.push(c[i]);
                if extend(chosen, i + 1, need - 1, c, orth) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    Some(extend(&mut Vec::new(), 0, r - 1, &candidates, &orthogonal))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_identities() {
        let h2 = vec![vec![1, 1], vec![1, -1]];
        let c = matrix_certificates(&h2).unwrap();
        assert!(c.hadamard && c.partial_hadamard);
        assert_eq!(c.weighing, Some(2));

        let ones = vec![vec![1, 1, 1], vec![1, 1, 1]];
        assert!(!matrix_certificates(&ones).unwrap().partial_hadamard);

        let s4 = vec![
            vec![0, 1, 1, 1],
            vec![-1, 0, 1, -1],
            vec![-1, -1, 0, 1],
            vec![-1, 1, -1, 0],
        ];
        let c = matrix_certificates(&s4).unwrap();
        assert!(c.skew_conference && c.conference);
        assert_eq!(c.weighing, Some(3));
        assert!(!c.hadamard);

        assert!(matches!(
            matrix_certificates(&[vec![2]]),
            Err(Error::NonConforming(2))
        ));
    }

    #[test]
    fn partial_hadamard_existence() {
        assert_eq!(exists_partial_hadamard(2, 2), Some(true));
        assert_eq!(exists_partial_hadamard(2, 3), Some(false));
        assert_eq!(exists_partial_hadamard(3, 4), Some(true));
        assert_eq!(exists_partial_hadamard(4, 8), Some(true));
        assert_eq!(exists_partial_hadamard(3, 6), Some(false));
        assert_eq!(exists_partial_hadamard(1, 5), Some(true));
    }

    #[test]
    fn partial_hadamard_search_agrees_with_brute_force() {
        // every r×s sign matrix for small sizes
        for (r, s) in [(2, 2), (2, 3), (2, 4), (3, 4), (3, 3)] {
            let cells = r * s;
            let found = (0..1u32 << cells).any(|bits| {
                let m: Vec<Vec<i64>> = (0..r)
                    .map(|i| {
                        (0..s)
                            .map(|j| if bits >> (i * s + j) & 1 == 1 { -1 } else { 1 })
                            .collect()
                    })
                    .collect();
                matrix_certificates(&m).unwrap().partial_hadamard
            });
            assert_eq!(exists_partial_hadamard(r, s), Some(found), "{r}x{s}");
        }
    }

    #[test]
    fn skew_conference_orders() {
        let caps = Caps::default();
        assert_eq!(skew_conference_exists(4, &caps), Some(true));
        assert_eq!(skew_conference_exists(5, &caps), Some(false));
        assert_eq!(skew_conference_exists(6, &caps), Some(false));
        assert_eq!(skew_conference_exists(8, &caps), Some(true));
    }
}
