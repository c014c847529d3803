use super::{sign_rule_graph, MajoranaMonomial, ObservableSet};
use crate::config::Caps;
use crate::error::{cap_check, Error, Result};
use crate::graph::{f2_rank, BitSet, Graph};

fn verify(obs: &ObservableSet, g: &Graph, what: &str) -> Result<()> {
    if sign_rule_graph(obs) != *g {
        return Err(Error::Internal(format!(
            "{what} realization does not reproduce the input graph"
        )));
    }
    Ok(())
}

/// Incidence construction: edge `i` (sorted order) carries label `i+1`; every
/// odd-degree vertex gets one fresh auxiliary label, assigned in vertex order.
/// Isolated vertices map to the identity.
pub fn realize_majorana(g: &Graph) -> Result<ObservableSet> {
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        sets[u].push(i + 1);
        sets[v].push(i + 1);
    }
    let mut next = g.m() + 1;
    for set in sets.iter_mut() {
        if set.len() % 2 == 1 {
            set.push(next);
            next += 1;
        }
    }
    let monomials = sets
        .into_iter()
        .map(MajoranaMonomial::new)
        .collect::<Result<Vec<_>>>()?;
    let obs = ObservableSet::new(monomials, next - 1)?;
    verify(&obs, g, "incidence")?;
    Ok(obs)
}

/// Quadratic realization of the line graph of `root`: root edge `{u,v}`
/// becomes `iΓ_{u+1}Γ_{v+1}`, in sorted edge order.
pub fn realize_line(root: &Graph) -> Result<ObservableSet> {
    let monomials = root
        .edges()
        .iter()
        .map(|&(u, v)| MajoranaMonomial::new(vec![u + 1, v + 1]))
        .collect::<Result<Vec<_>>>()?;
    ObservableSet::new(monomials, root.n())
}

/// Majorana index set of a Pauli string given by its `(x|z)` bit rows,
/// up to phase: `X_j ~ Γ_1⋯Γ_{2j-1}`, `Y_j ~ Γ_1⋯Γ_{2j-2}Γ_{2j}`, `Z_j ~ Γ_{2j-1}Γ_{2j}`.
fn pauli_to_indices(x: &[bool], z: &[bool]) -> Vec<usize> {
    let modes = 2 * x.len();
    let mut set = vec![false; modes + 1];
    let mut flip = |range: &mut dyn Iterator<Item = usize>| {
        for i in range {
            set[i] ^= true;
        }
    };
    for j in 1..=x.len() {
        match (x[j - 1], z[j - 1]) {
            (true, false) => flip(&mut (1..2 * j)),
            (true, true) => flip(&mut (1..2 * j - 1).chain([2 * j])),
            (false, true) => flip(&mut [2 * j - 1, 2 * j].into_iter()),
            (false, false) => {}
        }
    }
    (1..=modes).filter(|&i| set[i]).collect()
}

/// Realization on the minimal dimension `2^{r/2}`, `r` the F2 rank of the
/// adjacency matrix, via symplectic Gram–Schmidt over F2. Twins receive equal
/// monomials.
pub fn realize_minimal(g: &Graph, caps: &Caps) -> Result<ObservableSet> {
    let r = f2_rank(g);
    cap_check("F2 rank", r as u128, caps.max_rank as u128)?;
    let n = g.n();
    // form <a,b> = aᵀ B b; B·e_v is the neighbourhood of v
    let form = |a: &BitSet, b: &BitSet| -> bool {
        let mut acc = false;
        for v in a.iter() {
            acc ^= g.neighbors(v).dot_f2(b);
        }
        acc
    };
    let mut work: Vec<Option<BitSet>> = (0..n)
        .map(|v| {
            let mut e = BitSet::new(n);
            e.insert(v);
            Some(e)
        })
        .collect();
    let mut pairs: Vec<(BitSet, BitSet)> = Vec::new();
    loop {
        let mut found = None;
        'outer: for a in 0..n {
            let Some(wa) = &work[a] else { continue };
            for b in a + 1..n {
                if let Some(wb) = &work[b] {
                    if form(wa, wb) {
                        found = Some((a, b));
                        break 'outer;
                    }
                }
            }
        }
        let Some((a, b)) = found else { break };
        let x = work[a].take().unwrap();
        let z = work[b].take().unwrap();
        for slot in work.iter_mut().flatten() {
            let cz = form(slot, &z);
            let cx = form(slot, &x);
            if cz {
                slot.xor_with(&x);
            }
            if cx {
                slot.xor_with(&z);
            }
        }
        pairs.push((x, z));
    }
    if 2 * pairs.len() != r {
        return Err(Error::Internal(format!(
            "symplectic reduction found {} pairs for rank {r}",
            pairs.len()
        )));
    }
    let q = pairs.len();
    let monomials = (0..n)
        .map(|v| {
            let mut e = BitSet::new(n);
            e.insert(v);
            let xs: Vec<bool> = pairs.iter().map(|(_, z)| form(&e, z)).collect();
            let zs: Vec<bool> = pairs.iter().map(|(x, _)| form(&e, x)).collect();
            MajoranaMonomial::new(pauli_to_indices(&xs, &zs))
        })
        .collect::<Result<Vec<_>>>()?;
    let obs = ObservableSet::new(monomials, 2 * q)?;
    verify(&obs, g, "minimal")?;
    Ok(obs)
}

/// All `C(n_modes, k)` degree-`k` monomials in colex order.
pub fn degree_k_family(n_modes: usize, k: usize, caps: &Caps) -> Result<ObservableSet> {
    if n_modes % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "mode count must be even, got {n_modes}"
        )));
    }
    if k < 1 || k > n_modes {
        return Err(Error::InvalidParameter(format!(
            "degree must satisfy 1 <= k <= {n_modes}, got {k}"
        )));
    }
    let count = binomial(n_modes, k);
    cap_check("family size", count, caps.max_family_size as u128)?;
    let monomials = crate::graph::k_subsets_colex(n_modes, k)
        .into_iter()
        .map(|s| MajoranaMonomial::new(s.into_iter().map(|i| i + 1).collect()))
        .collect::<Result<Vec<_>>>()?;
    ObservableSet::new(monomials, n_modes)
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
