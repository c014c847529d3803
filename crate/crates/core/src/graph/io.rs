//! Plain-text edge lists (`n m` header, then `u v` per line) and JSON.

use serde::{Deserialize, Serialize};

use super::{FamilyMeta, Graph};
use crate::error::{Error, Result};

/// Serialized form of a [`Graph`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<FamilyMeta>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().to_vec(),
            meta: g.meta().cloned(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        let g = Graph::new(j.n, j.edges)?;
        Ok(match j.meta {
            Some(m) => g.with_meta(m),
            None => g,
        })
    }
}

pub fn to_json(g: &Graph) -> Result<String> {
    Ok(serde_json::to_string_pretty(&GraphJson::from(g))?)
}

pub fn from_json(s: &str) -> Result<Graph> {
    serde_json::from_str::<GraphJson>(s)?.try_into()
}

pub fn to_text(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn from_text(s: &str) -> Result<Graph> {
    let bad = |msg: String| Error::InvalidInput(msg);
    let mut lines = s
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let parse_pair = |lineno: usize, l: &str| -> Result<(usize, usize)> {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(bad(format!("line {}: expected two integers", lineno + 1)));
        }
        let p = |t: &str| {
            t.parse::<usize>().map_err(|_| {
                bad(format!(
                    "line {}: `{t}` is not a non-negative integer",
                    lineno + 1
                ))
            })
        };
        Ok((p(parts[0])?, p(parts[1])?))
    };
    let (hl, header) = lines.next().ok_or_else(|| bad("empty graph file".into()))?;
    let (n, m) = parse_pair(hl, header)?;
    let edges = lines
        .map(|(i, l)| parse_pair(i, l))
        .collect::<Result<Vec<_>>>()?;
    if edges.len() != m {
        return Err(bad(format!(
            "header declares {m} edges, found {}",
            edges.len()
        )));
    }
    Graph::new(n, edges)
}

/// Parses either format, deciding by the first non-blank character.
pub fn parse_any(s: &str) -> Result<Graph> {
    if s.trim_start().starts_with('{') {
        from_json(s)
    } else {
        from_text(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_family, Family};

    #[test]
    fn text_round_trip() {
        let g = gen_family(&Family::Rook { r: 2, s: 3 }).unwrap();
        let s = to_text(&g);
        let h = from_text(&s).unwrap();
        assert_eq!(g, h);
        assert_eq!(to_text(&h), s);
    }

    #[test]
    fn json_round_trip_keeps_meta() {
        let g = gen_family(&Family::MergedJohnson {
            n: 5,
            k: 3,
            l: vec![0, 2],
        })
        .unwrap();
        let s = to_json(&g).unwrap();
        let h = from_json(&s).unwrap();
        assert_eq!(g, h);
        assert_eq!(g.meta(), h.meta());
        assert_eq!(to_json(&h).unwrap(), s);
        assert!(s.contains("\"family\": \"merged-johnson\""));
    }

    #[test]
    fn rejects_malformed() {
        assert!(from_text("3 2\n0 1\n").is_err());
        assert!(from_text("3 1\n0 x\n").is_err());
        assert!(from_text("2 1\n0 2\n").is_err());
        assert!(from_json("{\"n\": 2, \"edges\": [[0, 0]]}").is_err());
        assert_eq!(parse_any("{\"n\": 2, \"edges\": [[1, 0]]}").unwrap().m(), 1);
    }
}
