use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::{
    eta_line_skew, eta_lower_bipartite_energy, eta_lower_chromatic, eta_lower_fractional,
    eta_upper_degree, eta_upper_lovasz, eta_upper_subgraph, line_root, SubgraphStrategy,
};
use super::closed_form::{closed_form, recognize_family, ExistenceCondition};
use super::exact::eta_exact_sdp;
use super::signing::eta_upper_signing;
use super::{BoundKind, BoundRecord, Method, SDP_TOL};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::graph::{twin_reduce, Family, Graph};
use crate::realization::{realize_majorana, realize_minimal};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsOptions {
    /// Scan vertex-deleted induced subgraphs for a better Lovász bound.
    pub subgraph_search: bool,
    /// Run the exhaustive signing bound.
    pub signing: bool,
    /// Solve the joint-measurability SDP when within caps.
    pub exact_sdp: bool,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        Self {
            subgraph_search: true,
            signing: true,
            exact_sdp: false,
        }
    }
}

/// Largest component on which the subgraph search runs.
const SEARCH_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
}

impl From<&Graph> for GraphSummary {
    fn from(g: &Graph) -> Self {
        Self {
            n: g.n(),
            m: g.m(),
            family: g
                .meta()
                .map(|m| m.family.clone())
                .filter(|f| *f != Family::Custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodFailure {
    pub method: Method,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    /// Original labels of the component's vertices, in component order.
    pub vertices: Vec<usize>,
    pub graph: GraphSummary,
    pub records: Vec<BoundRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<MethodFailure>,
    pub lower: f64,
    pub upper: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<f64>,
    pub consistent: bool,
}

/// η of a disjoint union is the minimum over components, so the interval is
/// the componentwise minimum of both ends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub graph: GraphSummary,
    /// After deleting twins.
    pub reduced: GraphSummary,
    /// `(deleted, kept)` twin pairs in original labels.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub twins: Vec<(usize, usize)>,
    pub components: Vec<ComponentReport>,
    pub lower: f64,
    pub upper: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<f64>,
    pub consistent: bool,
}

impl BoundsReport {
    /// All records of all components.
    pub fn records(&self) -> impl Iterator<Item = &BoundRecord> {
        self.components.iter().flat_map(|c| c.records.iter())
    }

    pub fn find(&self, method: Method, kind: BoundKind) -> Option<&BoundRecord> {
        self.records()
            .find(|r| r.method == method && r.kind == kind)
    }
}

#[derive(Clone, Copy, Debug)]
enum Task {
    ClosedForm,
    Lovasz,
    Clique,
    Search,
    Fractional,
    Chromatic,
    Signing,
    Line,
    ExactSdp,
}

impl Task {
    fn method(self) -> Method {
        match self {
            Task::ClosedForm => Method::ClosedForm,
            Task::Lovasz => Method::Lovasz,
            Task::Clique => Method::Clique,
            Task::Search => Method::SubgraphSearch,
            Task::Fractional => Method::Fractional,
            Task::Chromatic => Method::Chromatic,
            Task::Signing => Method::Signing,
            Task::Line => Method::LineSkew,
            Task::ExactSdp => Method::ExactSdp,
        }
    }
}

fn closed_form_records(g: &Graph, caps: &Caps) -> Result<Vec<BoundRecord>> {
    let Some(family) = recognize_family(g) else {
        return Ok(vec![]);
    };
    let cf = closed_form(&family, caps)?;
    let mut cert = serde_json::to_string(&family)?;
    if let Some(c) = &cf.condition {
        let (name, exists) = match c {
            ExistenceCondition::SkewConference { order, exists } => {
                (format!("skew-conference order {order}"), exists)
            }
            ExistenceCondition::PartialHadamard { rows, cols, exists } => {
                (format!("partial Hadamard {rows}x{cols}"), exists)
            }
        };
        let state = match exists {
            Some(true) => "exists",
            Some(false) => "does not exist",
            None => "undecided",
        };
        cert.push_str(&format!("; {name} {state}"));
    }
    let rec = |v, k| BoundRecord::new(Method::ClosedForm, v, k).with_certificate(cert.clone());
    Ok(match (cf.exact, cf.lower) {
        (Some(v), _) => vec![rec(v, BoundKind::Exact)],
        (None, Some(lo)) => vec![rec(lo, BoundKind::Lower), rec(cf.upper, BoundKind::Upper)],
        (None, None) => vec![rec(cf.upper, BoundKind::Upper)],
    })
}

fn line_records(g: &Graph, caps: &Caps) -> Result<Vec<BoundRecord>> {
    let Some(root) = line_root(g) else {
        return Ok(vec![]);
    };
    let mut out = vec![
        eta_line_skew(&root, caps)?.record(),
        eta_upper_degree(&root)?,
    ];
    match eta_lower_bipartite_energy(&root, caps) {
        Ok(r) => out.push(r),
        Err(Error::Precondition(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(out)
}

fn run_task(task: Task, g: &Graph, opts: &BoundsOptions, caps: &Caps) -> Result<Vec<BoundRecord>> {
    match task {
        Task::ClosedForm => closed_form_records(g, caps),
        Task::Lovasz => Ok(vec![eta_upper_lovasz(g, caps)?]),
        Task::Clique => Ok(vec![eta_upper_subgraph(g, SubgraphStrategy::Clique, caps)?]),
        Task::Search => {
            if !opts.subgraph_search || g.n() > SEARCH_LIMIT {
                return Ok(vec![]);
            }
            Ok(vec![eta_upper_subgraph(g, SubgraphStrategy::Search, caps)?])
        }
        Task::Fractional => Ok(vec![eta_lower_fractional(g, caps)?]),
        Task::Chromatic => Ok(vec![eta_lower_chromatic(g, caps)?]),
        Task::Signing => {
            if !opts.signing {
                return Ok(vec![]);
            }
            let obs = realize_minimal(g, caps).or_else(|_| realize_majorana(g))?;
            Ok(vec![eta_upper_signing::<f64>(&obs, caps)?.record()])
        }
        Task::Line => line_records(g, caps),
        Task::ExactSdp => {
            if !opts.exact_sdp {
                return Ok(vec![]);
            }
            let obs = realize_minimal(g, caps).or_else(|_| realize_majorana(g))?;
            let r = eta_exact_sdp::<f64>(&obs, caps)?;
            Ok(vec![BoundRecord::new(
                Method::ExactSdp,
                r.value,
                BoundKind::Exact,
            )
            .with_certificate(format!(
                "dual bound {:.9}, completeness residual {:.1e}, marginal residual {:.1e}",
                r.upper, r.residuals.completeness, r.residuals.marginal
            ))])
        }
    }
}

fn consistent(records: &[BoundRecord]) -> bool {
    records.iter().filter(|l| l.is_lower()).all(|lo| {
        records.iter().filter(|u| u.is_upper()).all(|up| {
            let sdp = lo.method == Method::ExactSdp || up.method == Method::ExactSdp;
            let tol = if sdp { SDP_TOL } else { 1e-6 };
            lo.value <= up.value + tol
        })
    })
}

fn component_report(
    g: &Graph,
    vertices: Vec<usize>,
    opts: &BoundsOptions,
    caps: &Caps,
) -> ComponentReport {
    if g.m() == 0 {
        // one observable (twins already merged) is trivially jointly measurable
        let rec = BoundRecord::new(Method::Trivial, 1.0, BoundKind::Exact);
        return ComponentReport {
            vertices,
            graph: g.into(),
            records: vec![rec],
            failures: vec![],
            lower: 1.0,
            upper: 1.0,
            exact: Some(1.0),
            consistent: true,
        };
    }
    let tasks = [
        Task::ClosedForm,
        Task::Lovasz,
        Task::Clique,
        Task::Search,
        Task::Fractional,
        Task::Chromatic,
        Task::Signing,
        Task::Line,
        Task::ExactSdp,
    ];
    let results: Vec<(Task, Result<Vec<BoundRecord>>)> = tasks
        .par_iter()
        .map(|&t| (t, run_task(t, g, opts, caps)))
        .collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (t, r) in results {
        match r {
            Ok(rs) => records.extend(rs),
            Err(e) => failures.push(MethodFailure {
                method: t.method(),
                error: e.to_string(),
            }),
        }
    }
    records.sort_by_key(|r| (r.method, r.kind as u8));
    let lower = records
        .iter()
        .filter(|r| r.is_lower())
        .map(|r| r.value)
        .fold(0.0, f64::max);
    let upper = records
        .iter()
        .filter(|r| r.is_upper())
        .map(|r| r.value)
        .fold(1.0, f64::min);
    let exact = [Method::ClosedForm, Method::LineSkew, Method::ExactSdp]
        .iter()
        .find_map(|&m| {
            records
                .iter()
                .find(|r| r.method == m && r.kind == BoundKind::Exact)
        })
        .map(|r| r.value);
    ComponentReport {
        vertices,
        graph: g.into(),
        consistent: consistent(&records),
        records,
        failures,
        lower,
        upper,
        exact,
    }
}

/// Twin reduction, component split, then every applicable method per component.
pub fn bounds_report(g: &Graph, opts: &BoundsOptions, caps: &Caps) -> BoundsReport {
    let red = twin_reduce(g);
    let reduced = &red.graph;
    let comps = reduced.connected_components();
    let components: Vec<ComponentReport> = if comps.len() == 1 {
        vec![component_report(reduced, red.kept.clone(), opts, caps)]
    } else {
        comps
            .par_iter()
            .map(|c| {
                let sub = reduced.induced_subgraph(c);
                let original = c.iter().map(|&v| red.kept[v]).collect();
                component_report(&sub, original, opts, caps)
            })
            .collect()
    };
    let lower = components.iter().map(|c| c.lower).fold(1.0, f64::min);
    let upper = components.iter().map(|c| c.upper).fold(1.0, f64::min);
    let exact = components
        .iter()
        .map(|c| c.exact)
        .collect::<Option<Vec<f64>>>()
        .map(|v| v.into_iter().fold(1.0, f64::min));
    BoundsReport {
        graph: g.into(),
        reduced: reduced.into(),
        twins: red.deleted(),
        consistent: components.iter().all(|c| c.consistent),
        components,
        lower: if g.n() == 0 { 1.0 } else { lower },
        upper,
        exact,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_family;

    fn fam(f: Family) -> Graph {
        gen_family(&f).unwrap()
    }

    #[test]
    fn complete_graph_collapses() {
        let r = bounds_report(
            &fam(Family::Complete { n: 4 }),
            &BoundsOptions::default(),
            &Caps::default(),
        );
        assert!(r.consistent);
        assert!((r.exact.unwrap() - 0.5).abs() < 1e-12);
        assert!((r.upper - 0.5).abs() < 1e-6 && (r.lower - 0.5).abs() < 1e-6);
    }

    #[test]
    fn c6_bounds_surround_the_exact_value() {
        let r = bounds_report(
            &fam(Family::Cycle { n: 6 }),
            &BoundsOptions::default(),
            &Caps::default(),
        );
        assert!(r.consistent, "{r:#?}");
        assert!((r.exact.unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let frac = r.find(Method::Fractional, BoundKind::Lower).unwrap();
        assert!((frac.value - 0.5).abs() < 1e-12);
        let lov = r.find(Method::Lovasz, BoundKind::Upper).unwrap();
        assert!((lov.value - 0.5f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn components_and_twins() {
        // triangle plus a disjoint edge plus an isolated vertex
        let g = Graph::new(6, [(0, 1), (0, 2), (1, 2), (3, 4)]).unwrap();
        let r = bounds_report(&g, &BoundsOptions::default(), &Caps::default());
        assert_eq!(r.components.len(), 3);
        assert!((r.exact.unwrap() - 3f64.powf(-0.5)).abs() < 1e-12);

        let star = fam(Family::CompleteBipartite { r: 1, s: 3 });
        let r = bounds_report(&star, &BoundsOptions::default(), &Caps::default());
        assert_eq!(r.reduced.n, 2);
        assert_eq!(r.twins.len(), 2);
        assert!((r.exact.unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn report_serializes() {
        let r = bounds_report(
            &fam(Family::Cycle { n: 5 }),
            &BoundsOptions::default(),
            &Caps::default(),
        );
        let json = serde_json::to_value(&r).unwrap();
        let recs = json["components"][0]["records"].as_array().unwrap();
        assert!(recs
            .iter()
            .any(|x| x["method"] == "fractional" && x["kind"] == "lower"));
    }
}
