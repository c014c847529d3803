//! Bounds on the incompatibility robustness η(G) and its exact computation
//! through the joint-measurability SDP.
//!
//! Tolerances follow two regimes: closed forms and spectral enumerations are
//! compared at `1e-9`, SDP-derived values at `1e-4`.

mod bounds;
mod closed_form;
mod exact;
mod report;
mod signing;

use serde::{Deserialize, Serialize};

pub use bounds::{
    eta_line_skew, eta_lower_bipartite_energy, eta_lower_chromatic, eta_lower_fractional,
    eta_upper_degree, eta_upper_lovasz, eta_upper_subgraph, line_root, LineSkew, SubgraphStrategy,
};
pub use closed_form::{
    closed_form, optimal_incompatibility_check, recognize_family, ClosedForm, ClosedFormFamily,
    ExistenceCondition, OptimalityCheck, Verdict,
};
pub use exact::{eta_exact_sdp, explicit_parent, ExactEta, ParentPovm, PovmResiduals};
pub use report::{
    bounds_report, BoundsOptions, BoundsReport, ComponentReport, GraphSummary, MethodFailure,
};
pub use signing::{eta_upper_signing, psi_estimate, PsiEstimate, SigningBound, PSI_RESTARTS};

/// Tolerance for comparisons between exact or enumerated values.
pub const EXACT_TOL: f64 = 1e-9;
/// Tolerance for comparisons involving SDP values.
pub const SDP_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Lower,
    Upper,
    Exact,
}

/// Which result a bound comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Single vertex or no edges: η = 1.
    Trivial,
    ClosedForm,
    /// `√(ϑ / |V|)`.
    Lovasz,
    /// `ω^{-1/2}`.
    Clique,
    /// Minimum of `√(ϑ(G[S]) / |S|)` over a heuristic family of subsets.
    SubgraphSearch,
    /// `1 / χ_f`.
    Fractional,
    /// `1 / χ`.
    Chromatic,
    /// Maximum signed-sum norm over `|V|`.
    Signing,
    /// `ℰ_s^max(root) / 2m`.
    LineSkew,
    /// `(n / 2m)·√Δ` of the root.
    DegreeBound,
    /// `ℰ(root) / 2m` for bipartite edge-transitive roots.
    BipartiteEnergy,
    ExactSdp,
}

/// One bound with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub method: Method,
    pub value: f64,
    pub kind: BoundKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    /// The choice of candidates (not the bound itself) is heuristic.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub heuristic: bool,
}

impl BoundRecord {
    pub fn new(method: Method, value: f64, kind: BoundKind) -> Self {
        Self {
            method,
            value,
            kind,
            certificate: None,
            heuristic: false,
        }
    }

    pub fn with_certificate(mut self, c: impl Into<String>) -> Self {
        self.certificate = Some(c.into());
        self
    }

    pub fn is_lower(&self) -> bool {
        matches!(self.kind, BoundKind::Lower | BoundKind::Exact)
    }

    pub fn is_upper(&self) -> bool {
        matches!(self.kind, BoundKind::Upper | BoundKind::Exact)
    }
}
