use crate::config::Caps;
use crate::error::{cap_check, Result};
use crate::graph::Graph;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::sdp::{self, BlockKind, Entry, SdpOptions, SdpProblem, SdpStatus};

/// Lovász number with a certified enclosure `lower ≤ ϑ ≤ upper`.
///
/// `upper` is `λ_max(J + Σ_e y_e E_e)` for the solver's edge multipliers, valid
/// for any `y`. `lower` comes from the primal matrix after zeroing edge entries
/// and shifting it back into the PSD cone, so it is a feasible objective value.
#[derive(Clone, Debug)]
pub struct ThetaResult<T> {
    pub value: T,
    pub lower: T,
    pub upper: T,
    /// `upper − lower`.
    pub gap: T,
    /// Feasible primal matrix attaining `lower`.
    pub x: Matrix<T>,
    pub status: SdpStatus,
    pub iterations: usize,
}

fn exact<T: Scalar>(value: T, x: Matrix<T>) -> ThetaResult<T> {
    ThetaResult {
        value,
        lower: value,
        upper: value,
        gap: T::zero(),
        x,
        status: SdpStatus::Optimal,
        iterations: 0,
    }
}

pub fn lovasz_theta<T: Scalar>(g: &Graph, caps: &Caps) -> Result<ThetaResult<T>> {
    let n = g.n();
    cap_check(
        "vertex count for the Lovász SDP",
        n as u128,
        caps.max_theta_vertices as u128,
    )?;
    if n == 0 {
        return Ok(exact(T::zero(), Matrix::zeros(0, 0)));
    }
    if g.m() == 0 {
        let nf = T::from_usize_lossy(n);
        return Ok(exact(nf, Matrix::from_fn(n, n, |_, _| T::one() / nf)));
    }

    let mut p = SdpProblem::<T>::new();
    let b = p.add_block(n, BlockKind::Real);
    for i in 0..n {
        for j in i..n {
            p.add_objective(Entry::real(b, i, j, -T::one()));
        }
    }
    p.add_constraint(
        (0..n).map(|i| Entry::real(b, i, i, T::one())).collect(),
        T::one(),
    );
    for &(u, v) in g.edges() {
        p.add_constraint(vec![Entry::real(b, u, v, T::one())], T::zero());
    }
    let sol = sdp::solve(&p, &SdpOptions::default(), caps)?;

    let mut dual = Matrix::from_fn(n, n, |_, _| T::one());
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        let y = sol.y[k + 1];
        dual[(u, v)] = dual[(u, v)] + y;
        dual[(v, u)] = dual[(v, u)] + y;
    }
    let upper = *dual.sym_eigenvalues().last().unwrap();

    let mut x = sol.x[b]
        .as_real()
        .cloned()
        .unwrap_or_else(|| Matrix::identity(n));
    x = x.symmetrized();
    for &(u, v) in g.edges() {
        x[(u, v)] = T::zero();
        x[(v, u)] = T::zero();
    }
    let shift = -x.min_sym_eigenvalue();
    if shift > T::zero() {
        for i in 0..n {
            x[(i, i)] = x[(i, i)] + shift;
        }
    }
    let tr = x.trace();
    let x = x.scale(T::one() / tr);
    let lower = x.as_slice().iter().fold(T::zero(), |a, &v| a + v);
    let lower = lower.min(upper);
    Ok(ThetaResult {
        value: (lower + upper) * T::lit(0.5),
        lower,
        upper,
        gap: upper - lower,
        x,
        status: sol.status,
        iterations: sol.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_family, Family};

    #[test]
    fn known_values() {
        let caps = Caps::default();
        for n in 1..=6 {
            let k = gen_family(&Family::Complete { n }).unwrap();
            let t = lovasz_theta::<f64>(&k, &caps).unwrap();
            assert!((t.value - 1.0).abs() < 1e-7, "K{n}: {t:?}");
        }
        let paw = Graph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        let t = lovasz_theta::<f64>(&paw, &caps).unwrap();
        assert!((t.value - 2.0).abs() < 1e-6);

        let c5 = gen_family(&Family::Cycle { n: 5 }).unwrap();
        let t = lovasz_theta::<f64>(&c5, &caps).unwrap();
        assert!((t.value - 5f64.sqrt()).abs() < 1e-6);
        assert!(t.gap <= 1e-7, "{}", t.gap);
        assert!(t.lower <= 5f64.sqrt() + 1e-12 && 5f64.sqrt() <= t.upper + 1e-12);

        let e = Graph::edgeless(4);
        assert_eq!(lovasz_theta::<f64>(&e, &caps).unwrap().value, 4.0);
    }

    #[test]
    fn primal_certificate_is_feasible() {
        let c7 = gen_family(&Family::Cycle { n: 7 }).unwrap();
        let t = lovasz_theta::<f64>(&c7, &Caps::default()).unwrap();
        assert!((t.x.trace() - 1.0).abs() < 1e-12);
        assert!(t.x.min_sym_eigenvalue() > -1e-12);
        for &(u, v) in c7.edges() {
            assert_eq!(t.x[(u, v)], 0.0);
        }
        // ϑ(C_n) = n cos(π/n) / (1 + cos(π/n)) for odd n
        let c = (std::f64::consts::PI / 7.0).cos();
        assert!((t.value - 7.0 * c / (1.0 + c)).abs() < 1e-6);
    }
}
