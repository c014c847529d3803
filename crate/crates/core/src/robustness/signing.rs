use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{BoundKind, BoundRecord, Method};
use crate::config::Caps;
use crate::error::{cap_check, Error, Result};
use crate::linalg::CMatrix;
use crate::realization::ObservableSet;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct SigningBound<T> {
    /// `max_a ‖Σ a_v A_v‖ / |V|`.
    pub value: T,
    pub norm: T,
    /// Maximizing signs, first entry fixed to `+1`.
    pub signs: Vec<i8>,
}

impl<T: Scalar> SigningBound<T> {
    pub fn record(&self) -> BoundRecord {
        let signs: String = self
            .signs
            .iter()
            .map(|&s| if s > 0 { '+' } else { '-' })
            .collect();
        BoundRecord::new(
            Method::Signing,
            self.value.to_f64_lossy().min(1.0),
            BoundKind::Upper,
        )
        .with_certificate(format!("signs {signs}"))
    }
}

fn signed_sum<T: Scalar>(mats: &[CMatrix<T>], coef: &[T]) -> CMatrix<T> {
    let d = mats[0].rows();
    let mut h = CMatrix::zeros(d, d);
    for (a, &c) in mats.iter().zip(coef) {
        h.axpy(c, a);
    }
    h
}

fn pattern_signs(n: usize, p: u64) -> Vec<i8> {
    (0..n)
        .map(|v| {
            if v > 0 && p >> (v - 1) & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .collect()
}

/// Exhaustive signing bound; `a ↦ −a` leaves the norm unchanged, so
/// `2^{n−1}` patterns suffice. Ties go to the smallest pattern.
pub fn eta_upper_signing<T: Scalar>(obs: &ObservableSet, caps: &Caps) -> Result<SigningBound<T>> {
    let n = obs.len();
    if n == 0 {
        return Err(Error::InvalidInput("no observables".into()));
    }
    cap_check(
        "observable count for exhaustive signing",
        n as u128,
        caps.max_signing_n as u128,
    )?;
    let mats = obs.matrices::<T>(caps.max_qubits)?;
    let count = 1u64 << (n - 1);
    let norms: Vec<T> = (0..count)
        .into_par_iter()
        .map(|p| {
            let coef: Vec<T> = pattern_signs(n, p)
                .iter()
                .map(|&s| T::lit(s as f64))
                .collect();
            signed_sum(&mats, &coef).hermitian_norm()
        })
        .collect();
    let best = norms.iter().copied().fold(T::zero(), T::max);
    let tol = T::lit(1e-12) * T::one().max(best);
    let p = norms.iter().position(|&v| v >= best - tol).unwrap_or(0) as u64;
    Ok(SigningBound {
        value: best / T::from_usize_lossy(n),
        norm: best,
        signs: pattern_signs(n, p),
    })
}

#[derive(Clone, Debug)]
pub struct PsiEstimate<T> {
    /// `‖Σ b_v A_v‖²` at `coefficients`, a lower bound on Ψ.
    pub value: T,
    /// Unit vector `b`.
    pub coefficients: Vec<T>,
}

pub const PSI_RESTARTS: usize = 32;

/// Largest-modulus eigenpair `(λ, ψ)`.
fn top_eigenpair<T: Scalar>(h: &CMatrix<T>) -> (T, Vec<Complex<T>>) {
    let (vals, vecs) = h.hermitian_eigen();
    let k = if vals[0].abs() > vals[vals.len() - 1].abs() {
        0
    } else {
        vals.len() - 1
    };
    (vals[k], vecs[k].clone())
}

/// Fixed-point ascent `b ← g/‖g‖` with `g_v = sign(λ)⟨ψ|A_v|ψ⟩`; each step does
/// not decrease `|λ|` since `|λ(g/‖g‖)| ≥ ‖g‖ ≥ g·b = |λ(b)|`.
fn ascend<T: Scalar>(mats: &[CMatrix<T>], mut b: Vec<T>) -> (T, Vec<T>) {
    let mut value = T::zero();
    for _ in 0..500 {
        let (lambda, psi) = top_eigenpair(&signed_sum(mats, &b));
        let current = lambda.abs();
        if current <= value * (T::one() + T::lit(1e-13)) && value > T::zero() {
            break;
        }
        value = current;
        let s = if lambda < T::zero() {
            -T::one()
        } else {
            T::one()
        };
        let g: Vec<T> = mats.iter().map(|a| s * a.expectation(&psi)).collect();
        let norm = g.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm <= T::epsilon() {
            break;
        }
        b = g.into_iter().map(|x| x / norm).collect();
    }
    // report the value attained at the returned coefficients
    let attained = signed_sum(mats, &b).hermitian_norm();
    (attained, b)
}

/// Multi-restart estimate of `Ψ = max_{‖b‖=1} ‖Σ b_v A_v‖²`: `restarts` random
/// unit starts (fixed seed) plus the best signing vector scaled by `1/√n`.
pub fn psi_estimate<T: Scalar>(
    obs: &ObservableSet,
    restarts: usize,
    caps: &Caps,
) -> Result<PsiEstimate<T>> {
    let n = obs.len();
    if n == 0 {
        return Err(Error::InvalidInput("no observables".into()));
    }
    let mats = obs.matrices::<T>(caps.max_qubits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut starts: Vec<Vec<T>> = (0..restarts)
        .map(|_| {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
            v.into_iter().map(|x| T::lit(x / norm)).collect()
        })
        .collect();
    if n <= caps.max_signing_n {
        let s = eta_upper_signing::<T>(obs, caps)?;
        let scale = T::one() / T::from_usize_lossy(n).sqrt();
        starts.push(s.signs.iter().map(|&a| T::lit(a as f64) * scale).collect());
    }
    let results: Vec<(T, Vec<T>)> = starts.into_par_iter().map(|b| ascend(&mats, b)).collect();
    let (norm, coefficients) = results
        .into_iter()
        .fold(None, |acc: Option<(T, Vec<T>)>, r| match acc {
            Some(a) if a.0 >= r.0 => Some(a),
            _ => Some(r),
        })
        .unwrap();
    Ok(PsiEstimate {
        value: norm * norm,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_family, Family, Graph};
    use crate::realization::{realize_majorana, realize_minimal};

    fn fam(f: Family) -> Graph {
        gen_family(&f).unwrap()
    }

    #[test]
    fn signing_examples() {
        let caps = Caps::default();
        let k2 = realize_majorana(&fam(Family::Complete { n: 2 })).unwrap();
        let s = eta_upper_signing::<f64>(&k2, &caps).unwrap();
        assert!((s.value - 0.5f64.sqrt()).abs() < 1e-12);
        let k3 = realize_majorana(&fam(Family::Complete { n: 3 })).unwrap();
        let s = eta_upper_signing::<f64>(&k3, &caps).unwrap();
        assert!((s.value - 3f64.powf(-0.5)).abs() < 1e-12);
        let p4 = realize_majorana(&fam(Family::Path { n: 4 })).unwrap();
        let s = eta_upper_signing::<f64>(&p4, &caps).unwrap();
        assert!((s.value - (1.0 + 3f64.sqrt()) / 4.0).abs() < 1e-12);
        let m = realize_minimal(&fam(Family::Path { n: 4 }), &caps).unwrap();
        assert!((eta_upper_signing::<f64>(&m, &caps).unwrap().value - s.value).abs() < 1e-12);
    }

    #[test]
    fn psi_examples() {
        let caps = Caps::default();
        let k4 = realize_majorana(&fam(Family::Complete { n: 4 })).unwrap();
        let p = psi_estimate::<f64>(&k4, 8, &caps).unwrap();
        assert!((p.value - 1.0).abs() < 1e-9);

        let e = realize_majorana(&Graph::edgeless(3)).unwrap();
        let p = psi_estimate::<f64>(&e, 8, &caps).unwrap();
        assert!((p.value - 3.0).abs() < 1e-9);

        let c5 = realize_minimal(&fam(Family::Cycle { n: 5 }), &caps).unwrap();
        let p = psi_estimate::<f64>(&c5, PSI_RESTARTS, &caps).unwrap();
        assert!(
            p.value >= 2.0 - 1e-9 && p.value <= 5f64.sqrt() + 1e-6,
            "{}",
            p.value
        );
        let norm: f64 = p.coefficients.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-9);
    }

    #[test]
    fn signing_caps() {
        let caps = Caps {
            max_signing_n: 2,
            ..Caps::default()
        };
        let k3 = realize_majorana(&fam(Family::Complete { n: 3 })).unwrap();
        assert!(matches!(
            eta_upper_signing::<f64>(&k3, &caps),
            Err(Error::CapExceeded { .. })
        ));
    }
}
