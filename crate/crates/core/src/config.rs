//! Size limits that keep exhaustive and dense computations at desk scale.

use serde::{Deserialize, Serialize};

/// Limits checked before any exponential or dense computation starts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Sum of squared (real) block sizes in one SDP.
    pub max_sdp_dim: usize,
    /// Maximum co-tree edge count `m - n + 1`, so at most `2^max_cotree` switching classes.
    pub max_cotree: usize,
    /// Maximum observable count for exhaustive signing (`2^(n-1)` signings).
    pub max_signing_n: usize,
    /// Maximum qubit count for dense matrix realizations.
    pub max_qubits: usize,
    /// Maximum F2 rank accepted by the minimal realization.
    pub max_rank: usize,
    /// Maximum number of monomials produced by a degree-k family.
    pub max_family_size: usize,
    /// Branch-and-bound limit for independence, clique and chromatic numbers.
    pub max_exact_vertices: usize,
    /// Limit for enumerating maximal independent sets.
    pub max_mis_vertices: usize,
    /// Limit for the Lovász SDP.
    pub max_theta_vertices: usize,
    /// Limit for the brute-force automorphism search.
    pub max_transitivity_vertices: usize,
    /// Limit on `2^n * d^2` for the exact joint-measurability SDP.
    pub max_joint_sdp: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_sdp_dim: 4_000_000,
            max_cotree: 24,
            max_signing_n: 24,
            max_qubits: 13,
            max_rank: 24,
            max_family_size: 100_000,
            max_exact_vertices: 40,
            max_mis_vertices: 30,
            max_theta_vertices: 80,
            max_transitivity_vertices: crate::graph::DEFAULT_TRANSITIVITY_CAP,
            max_joint_sdp: (1 << 6) * 16 * 16,
        }
    }
}

pub const ENV_MAX_SDP_DIM: &str = "INCOMPAT_MAX_SDP_DIM";
pub const ENV_MAX_CLASSES: &str = "INCOMPAT_MAX_CLASSES";
pub const ENV_THREADS: &str = "INCOMPAT_THREADS";

impl Caps {
    /// Defaults overridden by `INCOMPAT_MAX_SDP_DIM` and `INCOMPAT_MAX_CLASSES`
    /// (the latter is the co-tree exponent). Unparsable values are ignored.
    pub fn from_env() -> Self {
        let mut caps = Self::default();
        let read = |key: &str| std::env::var(key).ok().and_then(|v| v.trim().parse().ok());
        if let Some(v) = read(ENV_MAX_SDP_DIM) {
            caps.max_sdp_dim = v;
        }
        if let Some(v) = read(ENV_MAX_CLASSES) {
            caps.max_cotree = v;
        }
        caps
    }
}
