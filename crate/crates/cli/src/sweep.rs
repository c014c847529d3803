//! Per-family sweeps written as CSV. Every row carries the schema version in
//! its first column; a bound that was not computed is an empty field.

use std::io::Write;

use incompat::graph::gen_family;
use incompat::robustness::{
    bounds_report, closed_form, BoundKind, BoundsOptions, BoundsReport, ClosedFormFamily, Method,
};
use incompat::{Caps, Family, Result};
use rayon::prelude::*;

pub const SCHEMA_VERSION: u32 = 1;

/// Bound columns shared by both sweeps, in output order.
const METHOD_COLUMNS: [(&str, Method); 10] = [
    ("line_skew", Method::LineSkew),
    ("lovasz", Method::Lovasz),
    ("clique", Method::Clique),
    ("subgraph_search", Method::SubgraphSearch),
    ("fractional", Method::Fractional),
    ("chromatic", Method::Chromatic),
    ("signing", Method::Signing),
    ("degree_bound", Method::DegreeBound),
    ("bipartite_energy", Method::BipartiteEnergy),
    ("exact_sdp", Method::ExactSdp),
];

#[derive(Clone, Copy, Debug)]
pub enum SweepFamily {
    Cycles,
    Paths,
}

fn fmt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.12}")).unwrap_or_default()
}

fn method_value(report: &BoundsReport, method: Method) -> Option<f64> {
    // single-component graphs only, so a method contributes one value
    let recs: Vec<_> = report.records().filter(|r| r.method == method).collect();
    recs.iter()
        .find(|r| r.kind == BoundKind::Exact)
        .or_else(|| recs.first())
        .map(|r| r.value)
}

pub fn header(family: SweepFamily) -> Vec<&'static str> {
    let mut h = vec!["schema", "n", "parity"];
    match family {
        SweepFamily::Cycles => h.push("closed_form"),
        SweepFamily::Paths => h.extend(["interval_lower", "interval_upper"]),
    }
    h.extend(METHOD_COLUMNS.iter().map(|c| c.0));
    h.extend(["lower", "upper"]);
    h
}

fn row(family: SweepFamily, n: usize, opts: &BoundsOptions, caps: &Caps) -> Result<Vec<String>> {
    let (fam, cf_fam) = match family {
        SweepFamily::Cycles => (Family::Cycle { n }, ClosedFormFamily::Cycle { n }),
        SweepFamily::Paths => (Family::Path { n }, ClosedFormFamily::Path { n }),
    };
    let g = gen_family(&fam)?;
    let report = bounds_report(&g, opts, caps);
    let cf = closed_form(&cf_fam, caps)?;
    let mut out = vec![
        SCHEMA_VERSION.to_string(),
        n.to_string(),
        if n % 2 == 0 { "even" } else { "odd" }.to_string(),
    ];
    match family {
        SweepFamily::Cycles => out.push(fmt(cf.exact)),
        SweepFamily::Paths => out.extend([fmt(cf.lower), fmt(Some(cf.upper))]),
    }
    out.extend(
        METHOD_COLUMNS
            .iter()
            .map(|&(_, m)| fmt(method_value(&report, m))),
    );
    out.extend([fmt(Some(report.lower)), fmt(Some(report.upper))]);
    Ok(out)
}

pub fn write_sweep<W: Write>(
    w: W,
    family: SweepFamily,
    range: std::ops::RangeInclusive<usize>,
    opts: &BoundsOptions,
    caps: &Caps,
) -> Result<()> {
    let rows: Vec<Vec<String>> = range
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| row(family, n, opts, caps))
        .collect::<Result<_>>()?;
    let mut csv = csv::Writer::from_writer(w);
    let io = |e: csv::Error| incompat::Error::Io(e.into());
    csv.write_record(header(family)).map_err(io)?;
    for r in rows {
        csv.write_record(&r).map_err(io)?;
    }
    csv.flush()?;
    Ok(())
}
