use std::io::{self, Write};

use num_complex::Complex;

use crate::config::Caps;
use crate::error::{cap_check, Error, Result};
use crate::linalg::CMatrix;
use crate::realization::ObservableSet;
use crate::scalar::Scalar;
use crate::sdp::{
    self, BlockKind, BlockValue, Entry, SdpOptions, SdpProblem, SdpStatus, StartPoint,
};

/// Joint measurement with outcomes `a ∈ {±1}^n`. Effect `k` belongs to the
/// outcome with `a_v = −1` exactly when bit `v` of `k` is set.
#[derive(Clone, Debug)]
pub struct ParentPovm<T> {
    pub n: usize,
    pub d: usize,
    pub eta: T,
    pub effects: Vec<CMatrix<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PovmResiduals {
    /// Smallest eigenvalue over all effects.
    pub min_eigenvalue: f64,
    /// `‖Σ_a E(a) − I‖_max`.
    pub completeness: f64,
    /// Largest `‖Σ_{a_v=+} E(a) − (I + ηA_v)/2‖_max` over `v`.
    pub marginal: f64,
}

impl PovmResiduals {
    pub fn is_valid(&self) -> bool {
        self.min_eigenvalue >= -1e-8 && self.completeness <= 1e-8 && self.marginal <= 1e-7
    }
}

fn identity_sum<T: Scalar>(d: usize) -> CMatrix<T> {
    CMatrix::identity(d)
}

/// `E(a) = 2^{-n}(I + η Σ_v a_v A_v)`.
pub fn explicit_parent<T: Scalar>(observables: &[CMatrix<T>], eta: T) -> ParentPovm<T> {
    let n = observables.len();
    let d = observables.first().map_or(1, CMatrix::rows);
    let w = T::one() / T::lit(2f64.powi(n as i32));
    let effects = (0..1usize << n)
        .map(|k| {
            let mut e = identity_sum::<T>(d);
            for (v, a) in observables.iter().enumerate() {
                let s = if k >> v & 1 == 1 { -eta } else { eta };
                e.axpy(s, a);
            }
            e.scale(Complex::new(w, T::zero()))
        })
        .collect();
    ParentPovm { n, d, eta, effects }
}

impl<T: Scalar> ParentPovm<T> {
    pub fn residuals(&self, observables: &[CMatrix<T>]) -> PovmResiduals {
        let min_eigenvalue = self
            .effects
            .iter()
            .map(|e| e.hermitian_eigenvalues()[0].to_f64_lossy())
            .fold(f64::INFINITY, f64::min);
        let mut total = CMatrix::zeros(self.d, self.d);
        for e in &self.effects {
            total.axpy(T::one(), e);
        }
        let completeness = total
            .sub(&CMatrix::identity(self.d))
            .max_abs()
            .to_f64_lossy();
        let half = T::lit(0.5);
        let marginal = observables
            .iter()
            .enumerate()
            .map(|(v, a)| {
                let mut m = CMatrix::zeros(self.d, self.d);
                for (k, e) in self.effects.iter().enumerate() {
                    if k >> v & 1 == 0 {
                        m.axpy(T::one(), e);
                    }
                }
                let mut target = CMatrix::identity(self.d).scale(Complex::new(half, T::zero()));
                target.axpy(half * self.eta, a);
                m.sub(&target).max_abs().to_f64_lossy()
            })
            .fold(0.0, f64::max);
        PovmResiduals {
            min_eigenvalue,
            completeness,
            marginal,
        }
    }

    /// Little-endian binary: `n` and `d` as `u64`, then every effect row-major
    /// as `(re, im)` pairs of `f64`.
    pub fn write_binary<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(&(self.n as u64).to_le_bytes())?;
        w.write_all(&(self.d as u64).to_le_bytes())?;
        for e in &self.effects {
            for z in e.as_slice() {
                w.write_all(&z.re.to_f64_lossy().to_le_bytes())?;
                w.write_all(&z.im.to_f64_lossy().to_le_bytes())?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ExactEta<T> {
    /// Primal value: η attained by `povm`.
    pub value: T,
    /// Dual bound on η.
    pub upper: T,
    pub gap: T,
    pub povm: ParentPovm<T>,
    pub residuals: PovmResiduals,
    pub status: SdpStatus,
    pub iterations: usize,
}

fn check_involutions<T: Scalar>(mats: &[CMatrix<T>]) -> Result<()> {
    let tol = T::lit(1e-10).max(T::epsilon().sqrt());
    for (v, a) in mats.iter().enumerate() {
        let herm = a.sub(&a.adjoint()).max_abs();
        let sq = a.matmul(a).sub(&CMatrix::identity(a.rows())).max_abs();
        if herm > tol || sq > tol {
            return Err(Error::Precondition(format!(
                "observable {v} is not a Hermitian involution"
            )));
        }
    }
    Ok(())
}

/// Joint-measurability program: maximize η over PSD effects `E(a)` with
/// `Σ_a E(a) = I` and `Σ_{a_v=+} E(a) = (I + ηA_v)/2` for every `v`.
fn build<T: Scalar>(mats: &[CMatrix<T>]) -> (SdpProblem<T>, usize, BlockKind) {
    let n = mats.len();
    let d = mats[0].rows();
    let kind = if mats.iter().all(|a| a.is_real(T::zero())) {
        BlockKind::Real
    } else {
        BlockKind::Complex
    };
    let mut p = SdpProblem::new();
    let outcomes: Vec<usize> = (0..1usize << n).map(|_| p.add_block(d, kind)).collect();
    let eta = p.add_block(1, BlockKind::Real);
    p.add_objective(Entry::real(eta, 0, 0, -T::one()));
    let half = T::lit(0.5);
    for i in 0..d {
        for j in i..d {
            // Re X_ij is ⟨A, X⟩ for A with 1/2 at (i,j) and (j,i); 1 on the diagonal
            let re_coef = if i == j { T::one() } else { half };
            let delta = if i == j { T::one() } else { T::zero() };
            let im_needed = kind == BlockKind::Complex && i < j;
            let select = |v: Option<usize>| {
                outcomes
                    .iter()
                    .enumerate()
                    .filter(move |(k, _)| v.is_none_or(|v| k >> v & 1 == 0))
            };

            p.add_constraint(
                select(None)
                    .map(|(_, &b)| Entry::real(b, i, j, re_coef))
                    .collect(),
                delta,
            );
            if im_needed {
                let c = Complex::new(T::zero(), half);
                p.add_constraint(
                    select(None)
                        .map(|(_, &b)| Entry::complex(b, i, j, c))
                        .collect(),
                    T::zero(),
                );
            }
            for (v, a) in mats.iter().enumerate() {
                let mut row: Vec<Entry<T>> = select(Some(v))
                    .map(|(_, &b)| Entry::real(b, i, j, re_coef))
                    .collect();
                row.push(Entry::real(eta, 0, 0, -half * a[(i, j)].re));
                p.add_constraint(row, delta * half);
                if im_needed {
                    let c = Complex::new(T::zero(), half);
                    let mut row: Vec<Entry<T>> = select(Some(v))
                        .map(|(_, &b)| Entry::complex(b, i, j, c))
                        .collect();
                    row.push(Entry::real(eta, 0, 0, -half * a[(i, j)].im));
                    p.add_constraint(row, T::zero());
                }
            }
        }
    }
    (p, eta, kind)
}

/// Interior warm start: the explicit parent at `η = 1/(2n)`, which is positive
/// definite because `‖Σ a_v A_v‖ ≤ n`.
fn warm_start<T: Scalar>(p: &SdpProblem<T>, mats: &[CMatrix<T>], kind: BlockKind) -> StartPoint<T> {
    let eta0 = T::one() / T::from_usize_lossy(2 * mats.len());
    let parent = explicit_parent(mats, eta0);
    let d = parent.d;
    let to_block = |m: CMatrix<T>| match kind {
        BlockKind::Real => BlockValue::Real(m.re()),
        BlockKind::Complex => BlockValue::Complex(m),
    };
    let mut x: Vec<BlockValue<T>> = parent.effects.into_iter().map(to_block).collect();
    x.push(BlockValue::Real(crate::linalg::Matrix::from_fn(
        1,
        1,
        |_, _| eta0,
    )));
    let mut z: Vec<BlockValue<T>> = (0..1usize << mats.len())
        .map(|_| to_block(CMatrix::identity(d)))
        .collect();
    z.push(BlockValue::Real(crate::linalg::Matrix::identity(1)));
    StartPoint {
        x,
        y: vec![T::zero(); p.constraints().len()],
        z,
    }
}

/// Exact η of `obs` with a parent-POVM witness.
pub fn eta_exact_sdp<T: Scalar>(obs: &ObservableSet, caps: &Caps) -> Result<ExactEta<T>> {
    let n = obs.len();
    if n == 0 {
        return Err(Error::InvalidInput("no observables".into()));
    }
    if n >= usize::BITS as usize / 2 {
        return Err(Error::CapExceeded {
            what: "observable count for the joint-measurability SDP",
            value: n as u128,
            cap: (usize::BITS / 2) as u128,
        });
    }
    let d = obs.dimension();
    cap_check(
        "2^n * d^2 for the joint-measurability SDP",
        (1u128 << n) * (d as u128).pow(2),
        caps.max_joint_sdp as u128,
    )?;
    let mats = obs.matrices::<T>(caps.max_qubits)?;
    check_involutions(&mats)?;
    let (p, eta_block, kind) = build(&mats);

    let warm = SdpOptions {
        start: Some(warm_start(&p, &mats, kind)),
        ..SdpOptions::default()
    };
    let mut sol = sdp::solve(&p, &warm, caps)?;
    if !sol.is_optimal() {
        sol = sdp::solve(&p, &SdpOptions::default(), caps)?;
    }
    let sol = sol.require_optimal()?;

    let value = sol.x[eta_block].as_real().map_or(T::zero(), |m| m[(0, 0)]);
    let upper = -sol.dual_value;
    let effects: Vec<CMatrix<T>> = sol.x[..eta_block]
        .iter()
        .map(BlockValue::to_complex)
        .collect();
    let povm = ParentPovm {
        n,
        d,
        eta: value,
        effects,
    };
    let residuals = povm.residuals(&mats);
    Ok(ExactEta {
        value,
        upper,
        gap: (upper - value).abs(),
        povm,
        residuals,
        status: sol.status,
        iterations: sol.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_family, Family};
    use crate::realization::{realize_majorana, realize_minimal};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn complete_graphs() {
        for n in 2..=3 {
            let obs =
                realize_minimal(&gen_family(&Family::Complete { n }).unwrap(), &caps()).unwrap();
            let r = eta_exact_sdp::<f64>(&obs, &caps()).unwrap();
            let target = (n as f64).powf(-0.5);
            assert!((r.value - target).abs() < 1e-5, "K{n}: {}", r.value);
            assert!(r.gap < 1e-5);
            assert!(r.residuals.is_valid(), "{:?}", r.residuals);
            let mats = obs.matrices::<f64>(caps().max_qubits).unwrap();
            let explicit = explicit_parent(&mats, target);
            assert!(explicit.residuals(&mats).is_valid());
        }
    }

    #[test]
    fn realizations_agree_on_paw() {
        let paw = crate::graph::Graph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        let a = eta_exact_sdp::<f64>(&realize_majorana(&paw).unwrap(), &caps()).unwrap();
        let b = eta_exact_sdp::<f64>(&realize_minimal(&paw, &caps()).unwrap(), &caps()).unwrap();
        assert!((a.value - b.value).abs() < 1e-4);
        assert!((a.value - 3f64.powf(-0.5)).abs() < 1e-4);
    }

    #[test]
    fn binary_export_layout() {
        let obs =
            realize_minimal(&gen_family(&Family::Complete { n: 2 }).unwrap(), &caps()).unwrap();
        let mats = obs.matrices::<f64>(8).unwrap();
        let p = explicit_parent(&mats, 0.5);
        let mut buf = Vec::new();
        p.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 4 * 4 * 16);
        assert_eq!(u64::from_le_bytes(buf[..8].try_into().unwrap()), 2);
        assert_eq!(u64::from_le_bytes(buf[8..16].try_into().unwrap()), 2);
    }

    #[test]
    fn caps_and_preconditions() {
        let tiny = Caps {
            max_joint_sdp: 8,
            ..Caps::default()
        };
        let obs =
            realize_minimal(&gen_family(&Family::Complete { n: 3 }).unwrap(), &caps()).unwrap();
        assert!(matches!(
            eta_exact_sdp::<f64>(&obs, &tiny),
            Err(Error::CapExceeded { .. })
        ));
    }
}
