//! Binary observables realizing a prescribed anti-commutativity graph as
//! Majorana monomials, and their dense Jordan–Wigner matrices.

mod construct;
mod pauli;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use construct::{degree_k_family, realize_line, realize_majorana, realize_minimal};
pub use pauli::PauliString;

use crate::error::{cap_check, Error, Result};
use crate::graph::{BitSet, Graph};
use crate::linalg::CMatrix;
use crate::scalar::Scalar;

/// `i^α ∏_{j∈I} Γ_j` with `I` strictly increasing (1-based labels).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MajoranaMonomial {
    indices: Vec<usize>,
    phase_exponent: u8,
}

impl MajoranaMonomial {
    /// Monomial with the Hermitian phase `α = ⌊k/2⌋`.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        let alpha = Self::standard_phase(indices.len());
        Self::with_phase(indices, alpha)
    }

    pub fn with_phase(indices: Vec<usize>, phase_exponent: u8) -> Result<Self> {
        if indices.first() == Some(&0) {
            return Err(Error::InvalidInput("Majorana labels are 1-based".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "monomial indices must be strictly increasing: {indices:?}"
            )));
        }
        Ok(Self {
            indices,
            phase_exponent: phase_exponent % 4,
        })
    }

    pub fn standard_phase(degree: usize) -> u8 {
        ((degree / 2) % 4) as u8
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    pub fn phase_exponent(&self) -> u8 {
        self.phase_exponent
    }

    fn overlap(&self, other: &Self) -> usize {
        let (a, b) = (&self.indices, &other.indices);
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    c += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        c
    }

    /// Sign rule: `A_I A_J = (-1)^{|I||J| - |I∩J|} A_J A_I`.
    pub fn anticommutes(&self, other: &Self) -> bool {
        (self.degree() * other.degree() + self.overlap(other)) % 2 == 1
    }

    pub fn pauli(&self, qubits: usize) -> Result<PauliString> {
        let mut p = PauliString::identity(qubits);
        for &j in &self.indices {
            p = p.mul(&PauliString::majorana(j, qubits)?);
        }
        p.phase = (p.phase + self.phase_exponent) % 4;
        Ok(p)
    }
}

/// Dense Jordan–Wigner matrix of a monomial on `qubits` qubits.
pub fn monomial_matrix<T: Scalar>(mon: &MajoranaMonomial, qubits: usize) -> Result<CMatrix<T>> {
    monomial_matrix_capped(mon, qubits, crate::config::Caps::default().max_qubits)
}

pub fn monomial_matrix_capped<T: Scalar>(
    mon: &MajoranaMonomial,
    qubits: usize,
    max_qubits: usize,
) -> Result<CMatrix<T>> {
    cap_check("qubit count", qubits as u128, max_qubits as u128)?;
    mon.pauli(qubits)?.to_matrix(max_qubits)
}

/// One monomial per graph vertex, over `mode_count` Majorana labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ObservableSetJson", into = "ObservableSetJson")]
pub struct ObservableSet {
    monomials: Vec<MajoranaMonomial>,
    mode_count: usize,
}

#[derive(Clone, Serialize, Deserialize)]
struct MonomialJson {
    indices: Vec<usize>,
    alpha: u8,
}

#[derive(Clone, Serialize, Deserialize)]
struct ObservableSetJson {
    modes: usize,
    monomials: Vec<MonomialJson>,
}

impl TryFrom<ObservableSetJson> for ObservableSet {
    type Error = Error;

    fn try_from(j: ObservableSetJson) -> Result<Self> {
        let monomials = j
            .monomials
            .into_iter()
            .map(|m| MajoranaMonomial::with_phase(m.indices, m.alpha))
            .collect::<Result<Vec<_>>>()?;
        ObservableSet::new(monomials, j.modes)
    }
}

impl From<ObservableSet> for ObservableSetJson {
    fn from(o: ObservableSet) -> Self {
        Self {
            modes: o.mode_count,
            monomials: o
                .monomials
                .into_iter()
                .map(|m| MonomialJson {
                    alpha: m.phase_exponent,
                    indices: m.indices,
                })
                .collect(),
        }
    }
}

impl ObservableSet {
    pub fn new(monomials: Vec<MajoranaMonomial>, mode_count: usize) -> Result<Self> {
        for m in &monomials {
            if let Some(&last) = m.indices.last() {
                if last > mode_count {
                    return Err(Error::IndexOutOfRange {
                        index: last,
                        modes: mode_count,
                    });
                }
            }
        }
        Ok(Self {
            monomials,
            mode_count,
        })
    }

    pub fn monomials(&self) -> &[MajoranaMonomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn qubit_count(&self) -> usize {
        self.mode_count.div_ceil(2)
    }

    /// Hilbert-space dimension `2^qubits` (saturating for huge mode counts).
    pub fn dimension(&self) -> usize {
        1usize
            .checked_shl(self.qubit_count() as u32)
            .unwrap_or(usize::MAX)
    }

    /// First pair of positions carrying the same index set.
    pub fn find_duplicate(&self) -> Option<(usize, usize)> {
        let mut seen: HashMap<&[usize], usize> = HashMap::new();
        for (i, m) in self.monomials.iter().enumerate() {
            if let Some(&j) = seen.get(m.indices.as_slice()) {
                return Some((j, i));
            }
            seen.insert(&m.indices, i);
        }
        None
    }

    /// Dense matrices of every monomial, built in parallel.
    pub fn matrices<T: Scalar>(&self, max_qubits: usize) -> Result<Vec<CMatrix<T>>> {
        cap_check(
            "qubit count",
            self.qubit_count() as u128,
            max_qubits as u128,
        )?;
        let q = self.qubit_count();
        self.monomials
            .par_iter()
            .map(|m| monomial_matrix_capped(m, q, max_qubits))
            .collect()
    }
}

/// Graph of the symbolic sign rule, allowing repeated monomials (which commute).
pub fn sign_rule_graph(obs: &ObservableSet) -> Graph {
    let sets: Vec<BitSet> = obs
        .monomials
        .iter()
        .map(|m| {
            let mut b = BitSet::new(obs.mode_count + 1);
            m.indices.iter().for_each(|&i| b.insert(i));
            b
        })
        .collect();
    let deg: Vec<usize> = obs.monomials.iter().map(|m| m.degree()).collect();
    Graph::from_adjacency(obs.len(), |a, b| {
        (deg[a] * deg[b] + sets[a].intersection_len(&sets[b])) % 2 == 1
    })
}

/// Anti-commutativity graph of distinct monomials.
pub fn anticommutativity_graph(obs: &ObservableSet) -> Result<Graph> {
    if let Some((i, j)) = obs.find_duplicate() {
        return Err(Error::DuplicateMonomial(i, j));
    }
    Ok(sign_rule_graph(obs))
}
