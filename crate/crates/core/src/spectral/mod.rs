//! Adjacency and skew-adjacency spectra, energies, switching classes and
//! combinatorial matrix certificates.

mod certificates;
mod orientation;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use certificates::{
    exists_partial_hadamard, find_weighing_orientation, matrix_certificates,
    skew_conference_exists, CertificateReport,
};
pub use orientation::{Orientation, SwitchingClasses};

use crate::config::Caps;
use crate::error::Result;
use crate::graph::Graph;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Adjacency,
    Skew,
}

/// Eigenvalue magnitudes (descending) and their sum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralSummary<T> {
    pub magnitudes: Vec<T>,
    pub energy: T,
    pub kind: MatrixKind,
}

pub fn eigenvalues_symmetric<T: Scalar>(m: &crate::linalg::Matrix<T>) -> Vec<T> {
    m.sym_eigenvalues()
}

pub fn singular_values<T: Scalar>(m: &crate::linalg::Matrix<T>) -> Vec<T> {
    m.singular_values()
}

fn summarize<T: Scalar>(mut magnitudes: Vec<T>, kind: MatrixKind) -> SpectralSummary<T> {
    magnitudes.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let energy = magnitudes.iter().copied().sum();
    SpectralSummary {
        magnitudes,
        energy,
        kind,
    }
}

pub fn adjacency_summary<T: Scalar>(g: &Graph) -> SpectralSummary<T> {
    let vals = g.adjacency_matrix::<T>().sym_eigenvalues();
    summarize(
        vals.into_iter().map(|v| v.abs()).collect(),
        MatrixKind::Adjacency,
    )
}

pub fn skew_summary<T: Scalar>(o: &Orientation) -> SpectralSummary<T> {
    summarize(o.skew_matrix::<T>().singular_values(), MatrixKind::Skew)
}

/// Sum of absolute adjacency eigenvalues.
pub fn graph_energy<T: Scalar>(g: &Graph) -> T {
    adjacency_summary::<T>(g).energy
}

/// Sum of singular values of the skew-adjacency matrix.
pub fn skew_energy<T: Scalar>(o: &Orientation) -> T {
    skew_summary::<T>(o).energy
}

/// One orientation per switching class (spanning-tree gauge).
pub fn switching_classes(g: &Graph, caps: &Caps) -> Result<SwitchingClasses> {
    SwitchingClasses::new(g, caps)
}

/// Skew energies of every class representative, indexed by co-tree pattern.
pub fn class_energies<T: Scalar>(classes: &SwitchingClasses) -> Vec<T> {
    (0..classes.count() as usize)
        .into_par_iter()
        .map(|p| skew_energy::<T>(&classes.representative(p as u64)))
        .collect()
}

/// Maximum skew energy over all orientations with a witness. Among
/// representatives within `1e-9` relative of the maximum, the smallest co-tree
/// pattern (first co-tree edge most significant) wins.
pub fn max_skew_energy<T: Scalar>(g: &Graph, caps: &Caps) -> Result<(T, Orientation)> {
    let classes = switching_classes(g, caps)?;
    let energies = class_energies::<T>(&classes);
    let best = energies.iter().copied().fold(T::zero(), T::max);
    let tol = T::lit(1e-9) * T::one().max(best);
    let p = energies.iter().position(|&e| e >= best - tol).unwrap_or(0) as u64;
    Ok((best, classes.representative(p)))
}
