//! Incompatibility robustness of binary observables from their
//! anti-commutativity graph.

pub mod config;
pub mod error;
pub mod graph;
pub mod invariants;
pub mod linalg;
pub mod realization;
pub mod robustness;
pub mod scalar;
pub mod sdp;
pub mod spectral;

pub use config::Caps;
pub use error::{Error, Result};
pub use graph::{Family, FamilyMeta, Graph};
pub use scalar::Scalar;

pub type Matrix64 = linalg::Matrix<f64>;
pub type CMatrix64 = linalg::CMatrix<f64>;
pub type ThetaResult64 = invariants::ThetaResult<f64>;
pub type ExactEta64 = robustness::ExactEta<f64>;
pub type ParentPovm64 = robustness::ParentPovm<f64>;
pub type SigningBound64 = robustness::SigningBound<f64>;
pub type PsiEstimate64 = robustness::PsiEstimate<f64>;
