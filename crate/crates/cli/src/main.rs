mod input;
mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use incompat::config::{ENV_MAX_CLASSES, ENV_MAX_SDP_DIM, ENV_THREADS};
use incompat::graph::io as graph_io;
use incompat::invariants::InvariantReport;
use incompat::realization::{realize_line, realize_majorana, realize_minimal, ObservableSet};
use incompat::robustness::{
    bounds_report, closed_form, eta_exact_sdp, eta_line_skew, eta_lower_bipartite_energy,
    eta_upper_degree, optimal_incompatibility_check, recognize_family, BoundsOptions,
    ClosedFormFamily,
};
use incompat::spectral::{graph_energy, matrix_certificates, max_skew_energy, switching_classes};
use incompat::{Caps, Error, Graph, Result};
use serde_json::{json, Value};

use input::{read_matrix, GraphArgs};
use sweep::{write_sweep, SweepFamily};

#[derive(Parser)]
#[command(
    name = "incompat",
    version,
    about = "Incompatibility robustness of binary observables"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = ENV_THREADS)]
    threads: Option<usize>,
    /// Sum of squared block sizes allowed in one SDP.
    #[arg(long, global = true, env = ENV_MAX_SDP_DIM)]
    max_sdp_dim: Option<usize>,
    /// Co-tree exponent: at most 2^k switching classes are enumerated.
    #[arg(long, global = true, env = ENV_MAX_CLASSES)]
    max_classes: Option<usize>,
    /// Largest observable count for exhaustive signing.
    #[arg(long, global = true)]
    max_signing: Option<usize>,
    /// Largest `2^n * d^2` for the exact joint-measurability SDP.
    #[arg(long, global = true)]
    max_joint_sdp: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RealizationKind {
    Majorana,
    Minimal,
    /// Quadratic monomials realizing the line graph of the input root.
    Line,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

impl Output {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        })
    }

    fn json(&self, v: &impl serde::Serialize) -> Result<()> {
        let mut w = self.writer()?;
        serde_json::to_writer_pretty(&mut w, v)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a family graph.
    Gen {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
        #[command(flatten)]
        out: Output,
    },
    /// Independence, clique, chromatic and fractional chromatic numbers and ϑ.
    Invariants {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Every applicable bound on η, per connected component after twin reduction.
    Bounds {
        #[command(flatten)]
        graph: GraphArgs,
        /// Also solve the exact SDP when within caps.
        #[arg(long)]
        exact: bool,
        /// Skip the vertex-deletion subgraph search.
        #[arg(long)]
        no_search: bool,
        /// Skip the exhaustive signing bound.
        #[arg(long)]
        no_signing: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Exact η by the joint-measurability SDP.
    EtaExact {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value = "minimal")]
        realization: RealizationKind,
        /// Write the parent POVM effects here (binary, little endian).
        #[arg(long)]
        povm: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Skew energy, switching classes and the line-graph bounds of a root graph.
    Skew {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Explicit Majorana-monomial observables for a graph.
    Realize {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value = "minimal")]
        method: RealizationKind,
        #[command(flatten)]
        out: Output,
    },
    /// Weighing, conference and Hadamard identities of a {0,±1} matrix, or of
    /// the maximum-skew-energy orientation of a graph.
    Certify {
        #[arg(long, conflicts_with_all = ["graph", "family"])]
        matrix: Option<PathBuf>,
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Bounds over a range of cycles or paths as CSV.
    Sweep {
        #[arg(value_enum)]
        family: SweepKind,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Add the exact SDP column where within caps.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SweepKind {
    Cycles,
    Paths,
}

impl Cli {
    fn caps(&self) -> Caps {
        let mut caps = Caps::default();
        if let Some(v) = self.max_sdp_dim {
            caps.max_sdp_dim = v;
        }
        if let Some(v) = self.max_classes {
            caps.max_cotree = v;
        }
        if let Some(v) = self.max_signing {
            caps.max_signing_n = v;
        }
        if let Some(v) = self.max_joint_sdp {
            caps.max_joint_sdp = v;
        }
        caps
    }
}

fn realize(g: &Graph, kind: RealizationKind, caps: &Caps) -> Result<ObservableSet> {
    match kind {
        RealizationKind::Majorana => realize_majorana(g),
        RealizationKind::Minimal => realize_minimal(g, caps),
        RealizationKind::Line => realize_line(g),
    }
}

fn eta_exact(
    g: &Graph,
    kind: RealizationKind,
    povm: Option<&PathBuf>,
    caps: &Caps,
) -> Result<Value> {
    let obs = realize(g, kind, caps)?;
    let r = eta_exact_sdp::<f64>(&obs, caps)?;
    if let Some(p) = povm {
        let mut w = BufWriter::new(File::create(p)?);
        r.povm.write_binary(&mut w)?;
        w.flush()?;
    }
    let mut out = json!({
        "observables": obs.len(),
        "dimension": obs.dimension(),
        "eta": r.value,
        "dual_bound": r.upper,
        "gap": r.gap,
        "status": r.status,
        "iterations": r.iterations,
        "residuals": r.residuals,
        "povm_valid": r.residuals.is_valid(),
    });
    // paths are predicted to sit on the lower end of their interval
    if kind != RealizationKind::Line {
        if let Some(ClosedFormFamily::Path { n }) = recognize_family(g) {
            let cf = closed_form(&ClosedFormFamily::Path { n }, caps)?;
            if let Some(predicted) = cf.lower {
                let diff = (r.value - predicted).abs();
                out["path_prediction"] = json!({
                    "value": predicted,
                    "difference": diff,
                    "consistent": diff <= 1e-3,
                });
            }
        }
    }
    Ok(out)
}

fn skew(root: &Graph, caps: &Caps) -> Result<Value> {
    let classes = switching_classes(root, caps)?;
    let (emax, witness) = max_skew_energy::<f64>(root, caps)?;
    let mut out = json!({
        "n": root.n(),
        "m": root.m(),
        "switching_classes": classes.count(),
        "graph_energy": graph_energy::<f64>(root),
        "max_skew_energy": emax,
        "witness": witness,
    });
    // line-graph quantities need a connected root
    match eta_line_skew(root, caps) {
        Ok(l) => {
            out["line_skew"] =
                json!({ "value": l.value, "exact": l.exact, "edge_transitive": l.edge_transitive });
            out["degree_bound"] = json!(eta_upper_degree(root)?.value);
            out["optimality"] = serde_json::to_value(optimal_incompatibility_check(root, caps)?)?;
            if let Ok(b) = eta_lower_bipartite_energy(root, caps) {
                out["bipartite_energy_lower"] = json!(b.value);
            }
        }
        Err(Error::Disconnected) => {}
        Err(e) => return Err(e),
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<()> {
    let caps = cli.caps();
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Internal(e.to_string()))?;
    }
    match &cli.command {
        Command::Gen { graph, format, out } => {
            let g = graph.load()?;
            let text = match format {
                GraphFormat::Json => graph_io::to_json(&g)? + "\n",
                GraphFormat::Text => graph_io::to_text(&g),
            };
            let mut w = out.writer()?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        Command::Invariants { graph, out } => {
            out.json(&InvariantReport::compute(&graph.load()?, &caps))?
        }
        Command::Bounds {
            graph,
            exact,
            no_search,
            no_signing,
            out,
        } => {
            let opts = BoundsOptions {
                subgraph_search: !no_search,
                signing: !no_signing,
                exact_sdp: *exact,
            };
            out.json(&bounds_report(&graph.load()?, &opts, &caps))?
        }
        Command::EtaExact {
            graph,
            realization,
            povm,
            out,
        } => out.json(&eta_exact(
            &graph.load()?,
            *realization,
            povm.as_ref(),
            &caps,
        )?)?,
        Command::Skew { graph, out } => out.json(&skew(&graph.load()?, &caps)?)?,
        Command::Realize { graph, method, out } => {
            out.json(&realize(&graph.load()?, *method, &caps)?)?
        }
        Command::Certify { matrix, graph, out } => {
            let m = match matrix {
                Some(p) => read_matrix(p)?,
                None => max_skew_energy::<f64>(&graph.load()?, &caps)?
                    .1
                    .skew_integer_matrix(),
            };
            out.json(&json!({ "matrix": m, "certificate": matrix_certificates(&m)? }))?
        }
        Command::Sweep {
            family,
            from,
            to,
            exact,
            out,
        } => {
            if from > to {
                return Err(Error::InvalidParameter(format!(
                    "empty range {from}..={to}"
                )));
            }
            let fam = match family {
                SweepKind::Cycles => SweepFamily::Cycles,
                SweepKind::Paths => SweepFamily::Paths,
            };
            let opts = BoundsOptions {
                exact_sdp: *exact,
                ..BoundsOptions::default()
            };
            write_sweep(out.writer()?, fam, *from..=*to, &opts, &caps)?
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => 3,
        Error::SolverFailure { .. } => 4,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
