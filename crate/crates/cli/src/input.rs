use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use incompat::graph::{gen_family, io, line_graph};
use incompat::{Error, Family, Graph, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Cycle,
    Path,
    Complete,
    CompleteBipartite,
    Hypercube,
    Johnson,
    MergedJohnson,
    Rook,
}

/// A graph given either as a file or as a generated family.
#[derive(Clone, Debug, Args)]
pub struct GraphArgs {
    /// Graph file, JSON or edge-list text.
    #[arg(long, conflicts_with = "family")]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Intersection sizes for merged Johnson graphs, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub l: Vec<usize>,
    /// Replace the graph by its line graph.
    #[arg(long)]
    pub line: bool,
}

fn need(v: Option<usize>, name: &str, family: FamilyName) -> Result<usize> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required for {family:?}")))
}

impl GraphArgs {
    pub fn family(&self) -> Result<Option<Family>> {
        let Some(f) = self.family else {
            return Ok(None);
        };
        let n = || need(self.n, "n", f);
        let k = || need(self.k, "k", f);
        let r = || need(self.r, "r", f);
        let s = || need(self.s, "s", f);
        Ok(Some(match f {
            FamilyName::Cycle => Family::Cycle { n: n()? },
            FamilyName::Path => Family::Path { n: n()? },
            FamilyName::Complete => Family::Complete { n: n()? },
            FamilyName::CompleteBipartite => Family::CompleteBipartite { r: r()?, s: s()? },
            FamilyName::Hypercube => Family::Hypercube {
                d: need(self.d, "d", f)?,
            },
            FamilyName::Johnson => Family::Johnson { n: n()?, k: k()? },
            FamilyName::MergedJohnson => {
                if self.l.is_empty() {
                    return Err(Error::InvalidParameter(
                        "--l is required for MergedJohnson".into(),
                    ));
                }
                Family::MergedJohnson {
                    n: n()?,
                    k: k()?,
                    l: self.l.clone(),
                }
            }
            FamilyName::Rook => Family::Rook { r: r()?, s: s()? },
        }))
    }

    pub fn load(&self) -> Result<Graph> {
        let g = match (&self.graph, self.family()?) {
            (Some(path), _) => read_graph(path)?,
            (None, Some(f)) => gen_family(&f)?,
            (None, None) => {
                return Err(Error::InvalidParameter(
                    "give --graph FILE or --family NAME".into(),
                ))
            }
        };
        Ok(if self.line { line_graph(&g).0 } else { g })
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    io::parse_any(&fs::read_to_string(path)?)
}

/// Integer matrix as a JSON array of rows or whitespace-separated text rows.
pub fn read_matrix(path: &Path) -> Result<Vec<Vec<i64>>> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('[') {
        return Ok(serde_json::from_str(&text)?);
    }
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| Error::InvalidInput(format!("`{t}` is not an integer")))
                })
                .collect()
        })
        .collect()
}
