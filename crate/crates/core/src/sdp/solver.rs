//! Infeasible-start HKM path following with an optional Mehrotra corrector.

use num_complex::Complex;
use rayon::prelude::*;

use super::{
    BlockKind, BlockValue, Entry, IterateRecord, SdpOptions, SdpProblem, SdpSolution, SdpStatus,
};
use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve, CMatrix, Matrix};
use crate::scalar::Scalar;

/// Ordered `(row, col, value)` triples of a real symmetric coefficient matrix,
/// with both mirror positions listed explicitly.
type Pairs<T> = Vec<(usize, usize, T)>;

struct Prepared<T> {
    kinds: Vec<BlockKind>,
    sizes: Vec<usize>,
    c: Vec<Matrix<T>>,
    /// Per block: constraints touching it.
    cons: Vec<Vec<(usize, Pairs<T>)>>,
    b: Vec<T>,
}

fn expand<T: Scalar>(e: &Entry<T>, kind: BlockKind, d: usize, out: &mut Pairs<T>) {
    let (p, q) = (e.row, e.col);
    match kind {
        BlockKind::Real => {
            out.push((p, q, e.value.re));
            if p != q {
                out.push((q, p, e.value.re));
            }
        }
        BlockKind::Complex => {
            // ⟨M, X⟩ = ⟨emb(M)/2, emb(X)⟩
            let half = T::lit(0.5);
            let (a, bi) = (e.value.re * half, e.value.im * half);
            if p == q {
                out.push((p, p, a));
                out.push((d + p, d + p, a));
            } else {
                for (r, s, v) in [
                    (p, q, a),
                    (d + p, d + q, a),
                    (p, d + q, -bi),
                    (q, d + p, bi),
                ] {
                    out.push((r, s, v));
                    out.push((s, r, v));
                }
            }
        }
    }
}

impl<T: Scalar> Prepared<T> {
    fn new(p: &SdpProblem<T>) -> Self {
        let kinds: Vec<BlockKind> = p.blocks.iter().map(|b| b.kind).collect();
        let sizes: Vec<usize> = p.blocks.iter().map(|b| b.real_size()).collect();
        let mut c: Vec<Matrix<T>> = sizes.iter().map(|&s| Matrix::zeros(s, s)).collect();
        for e in &p.objective {
            let mut pairs = Vec::new();
            expand(e, kinds[e.block], p.blocks[e.block].size, &mut pairs);
            for (r, s, v) in pairs {
                c[e.block][(r, s)] = c[e.block][(r, s)] + v;
            }
        }
        let mut cons: Vec<Vec<(usize, Pairs<T>)>> = vec![Vec::new(); sizes.len()];
        for (i, con) in p.constraints.iter().enumerate() {
            let mut per_block: Vec<Pairs<T>> = vec![Vec::new(); sizes.len()];
            for e in &con.entries {
                expand(
                    e,
                    kinds[e.block],
                    p.blocks[e.block].size,
                    &mut per_block[e.block],
                );
            }
            for (b, pairs) in per_block.into_iter().enumerate() {
                if !pairs.is_empty() {
                    cons[b].push((i, pairs));
                }
            }
        }
        Self {
            kinds,
            sizes,
            c,
            cons,
            b: p.constraints.iter().map(|c| c.rhs).collect(),
        }
    }

    fn m(&self) -> usize {
        self.b.len()
    }

    /// `(tr(A_i K))_i`.
    fn apply(&self, k: &[Matrix<T>]) -> Vec<T> {
        let mut out = vec![T::zero(); self.m()];
        for (blk, list) in self.cons.iter().enumerate() {
            for (i, pairs) in list {
                let s: T = pairs.iter().map(|&(r, c, u)| u * k[blk][(c, r)]).sum();
                out[*i] = out[*i] + s;
            }
        }
        out
    }

    /// `Σ_i y_i A_i`.
    fn adjoint(&self, y: &[T]) -> Vec<Matrix<T>> {
        self.sizes
            .iter()
            .zip(&self.cons)
            .map(|(&s, list)| {
                let mut d = Matrix::zeros(s, s);
                for (i, pairs) in list {
                    for &(r, c, u) in pairs {
                        d[(r, c)] = d[(r, c)] + y[*i] * u;
                    }
                }
                d
            })
            .collect()
    }

    /// Schur complement `M_ij = tr(A_i X A_j Z⁻¹)`.
    fn schur(&self, x: &[Matrix<T>], w: &[Matrix<T>]) -> Matrix<T> {
        let m = self.m();
        let mut big = Matrix::zeros(m, m);
        for (blk, list) in self.cons.iter().enumerate() {
            let (xb, wb) = (&x[blk], &w[blk]);
            let rows: Vec<Vec<(usize, usize, T)>> = (0..list.len())
                .into_par_iter()
                .map(|a| {
                    let (i, pi) = &list[a];
                    list[a..]
                        .iter()
                        .map(|(j, pj)| {
                            let mut acc = T::zero();
                            for &(r, c, u) in pi {
                                let mut inner = T::zero();
                                for &(s, t, v) in pj {
                                    inner = inner + v * xb[(c, s)] * wb[(t, r)];
                                }
                                acc = acc + u * inner;
                            }
                            (*i, *j, acc)
                        })
                        .collect()
                })
                .collect();
            for (i, j, v) in rows.into_iter().flatten() {
                big[(i, j)] = big[(i, j)] + v;
                if i != j {
                    big[(j, i)] = big[(j, i)] + v;
                }
            }
        }
        big
    }

    fn to_internal(&self, blk: usize, v: &BlockValue<T>, dual: bool) -> Matrix<T> {
        match self.kinds[blk] {
            BlockKind::Real => match v {
                BlockValue::Real(m) => m.clone(),
                BlockValue::Complex(c) => c.re(),
            },
            BlockKind::Complex => {
                let e = v.to_complex().real_embedding();
                if dual {
                    e.scale(T::lit(0.5))
                } else {
                    e
                }
            }
        }
    }

    fn to_external(&self, blk: usize, m: &Matrix<T>, dual: bool) -> BlockValue<T> {
        match self.kinds[blk] {
            BlockKind::Real => BlockValue::Real(m.clone()),
            BlockKind::Complex => {
                let c = CMatrix::from_real_embedding(m);
                BlockValue::Complex(if dual {
                    c.scale(Complex::new(T::lit(2.0), T::zero()))
                } else {
                    c
                })
            }
        }
    }
}

fn inner<T: Scalar>(a: &[Matrix<T>], b: &[Matrix<T>]) -> T {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn norm<T: Scalar>(a: &[Matrix<T>]) -> T {
    inner(a, a).sqrt()
}

fn vnorm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// Largest `α` with `X + αΔX ⪰ 0` (infinite when `ΔX ⪰ 0`).
fn max_step<T: Scalar>(x: &Matrix<T>, dx: &Matrix<T>) -> T {
    if x.rows() == 1 {
        let d = dx[(0, 0)];
        return if d >= T::zero() {
            T::infinity()
        } else {
            -x[(0, 0)] / d
        };
    }
    let Some(l) = x.cholesky() else {
        return T::zero();
    };
    let li = l.lower_inverse();
    let k = li.matmul(dx).matmul(&li.transpose()).symmetrized();
    let lam = k.min_sym_eigenvalue();
    if lam >= T::zero() {
        T::infinity()
    } else {
        -T::one() / lam
    }
}

fn block_max_step<T: Scalar>(x: &[Matrix<T>], dx: &[Matrix<T>]) -> T {
    x.iter()
        .zip(dx)
        .map(|(a, b)| max_step(a, b))
        .fold(T::infinity(), T::min)
}

fn cholesky_regularized<T: Scalar>(m: &Matrix<T>) -> Option<Matrix<T>> {
    if let Some(l) = m.cholesky() {
        return Some(l);
    }
    let scale = (0..m.rows())
        .map(|i| m[(i, i)].abs())
        .fold(T::zero(), T::max);
    let mut delta = scale * T::epsilon() * T::lit(100.0);
    for _ in 0..8 {
        let mut r = m.clone();
        for i in 0..r.rows() {
            r[(i, i)] = r[(i, i)] + delta;
        }
        if let Some(l) = r.cholesky() {
            return Some(l);
        }
        delta = delta * T::lit(100.0);
    }
    None
}

struct Direction<T> {
    dx: Vec<Matrix<T>>,
    dy: Vec<T>,
    dz: Vec<Matrix<T>>,
}

pub(super) fn run<T: Scalar>(p: &SdpProblem<T>, opts: &SdpOptions<T>) -> Result<SdpSolution<T>> {
    let pr = Prepared::new(p);
    let nb = pr.sizes.len();
    let m = pr.m();
    let n_total = T::from_usize_lossy(pr.sizes.iter().sum::<usize>().max(1));
    let b_norm = vnorm(&pr.b);
    let c_norm = norm(&pr.c);

    let (mut x, mut y, mut z) = match &opts.start {
        Some(s) => {
            if s.x.len() != nb || s.z.len() != nb || s.y.len() != m {
                return Err(Error::InvalidInput(
                    "start point does not match the problem shape".into(),
                ));
            }
            (
                (0..nb)
                    .map(|b| pr.to_internal(b, &s.x[b], false))
                    .collect::<Vec<_>>(),
                s.y.clone(),
                (0..nb)
                    .map(|b| pr.to_internal(b, &s.z[b], true))
                    .collect::<Vec<_>>(),
            )
        }
        None => default_start(&pr),
    };

    let mut history = Vec::new();
    let mut status = SdpStatus::MaxIter;
    let mut iterations = 0;
    let mut last = (T::zero(), T::zero(), T::zero(), T::zero());
    for it in 0..=opts.max_iter {
        iterations = it;
        let ax = pr.apply(&x);
        let rp: Vec<T> = pr.b.iter().zip(&ax).map(|(&b, &a)| b - a).collect();
        let aty = pr.adjoint(&y);
        let rd: Vec<Matrix<T>> = (0..nb).map(|b| pr.c[b].sub(&z[b]).sub(&aty[b])).collect();
        let pobj = inner(&pr.c, &x);
        let dobj: T = pr.b.iter().zip(&y).map(|(&b, &v)| b * v).sum();
        let mu = inner(&x, &z) / n_total;
        let pinf = vnorm(&rp) / (T::one() + b_norm);
        let dinf = norm(&rd) / (T::one() + c_norm);
        let relgap = (pobj - dobj).abs() / (T::one() + pobj.abs() + dobj.abs());
        last = (pobj, dobj, pinf, dinf);
        if opts.record_history {
            history.push(IterateRecord {
                primal: pobj,
                dual: dobj,
                primal_residual: pinf,
                dual_residual: dinf,
                mu,
            });
        }
        if !(pobj.is_finite() && dobj.is_finite() && mu.is_finite()) {
            status = SdpStatus::NumericalBreakdown;
            break;
        }
        if relgap <= opts.gap_tol && pinf <= opts.feas_tol && dinf <= opts.feas_tol {
            status = SdpStatus::Optimal;
            break;
        }
        let huge = T::lit(1e12);
        if vnorm(&y) > huge * (T::one() + c_norm) || norm(&x) > huge * (T::one() + b_norm) {
            status = SdpStatus::InfeasibleDetected;
            break;
        }
        if it == opts.max_iter {
            break;
        }

        let Some(w) = z
            .iter()
            .map(|zb| zb.spd_inverse())
            .collect::<Option<Vec<_>>>()
        else {
            status = SdpStatus::NumericalBreakdown;
            break;
        };
        let schur = pr.schur(&x, &w);
        let Some(l) = cholesky_regularized(&schur) else {
            status = SdpStatus::NumericalBreakdown;
            break;
        };
        let xrdw: Vec<Matrix<T>> = (0..nb).map(|b| x[b].matmul(&rd[b]).matmul(&w[b])).collect();
        let a_xrdw = pr.apply(&xrdw);
        let base: Vec<T> = (0..m).map(|i| rp[i] + ax[i] + a_xrdw[i]).collect();

        // K = sym(R_c Z⁻¹) drives the centering/corrector terms
        let direction = |k: &[Matrix<T>]| -> Direction<T> {
            let ak = pr.apply(k);
            let rhs: Vec<T> = (0..m).map(|i| base[i] - ak[i]).collect();
            let dy = cholesky_solve(&l, &rhs);
            let atdy = pr.adjoint(&dy);
            let dz: Vec<Matrix<T>> = (0..nb).map(|b| rd[b].sub(&atdy[b])).collect();
            let dx = (0..nb)
                .map(|b| {
                    let corr = x[b].matmul(&dz[b]).matmul(&w[b]).symmetrized();
                    k[b].sub(&x[b]).sub(&corr)
                })
                .collect();
            Direction { dx, dy, dz }
        };

        let dir = if opts.predictor_corrector {
            let zero: Vec<Matrix<T>> = pr.sizes.iter().map(|&s| Matrix::zeros(s, s)).collect();
            let pred = direction(&zero);
            let ap = T::one().min(block_max_step(&x, &pred.dx));
            let ad = T::one().min(block_max_step(&z, &pred.dz));
            let x_aff: Vec<Matrix<T>> = (0..nb).map(|b| x[b].add(&pred.dx[b].scale(ap))).collect();
            let z_aff: Vec<Matrix<T>> = (0..nb).map(|b| z[b].add(&pred.dz[b].scale(ad))).collect();
            let mu_aff = inner(&x_aff, &z_aff) / n_total;
            let ratio = (mu_aff / mu).max(T::zero()).min(T::one());
            let sigma = ratio * ratio * ratio;
            let k: Vec<Matrix<T>> = (0..nb)
                .map(|b| {
                    let mut rc = pred.dx[b].matmul(&pred.dz[b]).scale(-T::one());
                    for i in 0..rc.rows() {
                        rc[(i, i)] = rc[(i, i)] + sigma * mu;
                    }
                    rc.matmul(&w[b]).symmetrized()
                })
                .collect();
            direction(&k)
        } else {
            let sigma = T::lit(0.1);
            let k: Vec<Matrix<T>> = w.iter().map(|wb| wb.scale(sigma * mu)).collect();
            direction(&k)
        };

        let ap = T::one().min(opts.step_fraction * block_max_step(&x, &dir.dx));
        let ad = T::one().min(opts.step_fraction * block_max_step(&z, &dir.dz));
        if ap <= T::epsilon() && ad <= T::epsilon() {
            status = SdpStatus::NumericalBreakdown;
            break;
        }
        for b in 0..nb {
            x[b] = x[b].add(&dir.dx[b].scale(ap)).symmetrized();
            z[b] = z[b].add(&dir.dz[b].scale(ad)).symmetrized();
        }
        for (yi, di) in y.iter_mut().zip(&dir.dy) {
            *yi = *yi + ad * *di;
        }
    }

    let (pobj, dobj, pinf, dinf) = last;
    Ok(SdpSolution {
        primal_value: pobj,
        dual_value: dobj,
        gap: (pobj - dobj).abs(),
        x: (0..nb).map(|b| pr.to_external(b, &x[b], false)).collect(),
        z: (0..nb).map(|b| pr.to_external(b, &z[b], true)).collect(),
        y,
        primal_residual: pinf,
        dual_residual: dinf,
        iterations,
        status,
        history,
    })
}

/// `X = ξI`, `Z = ζI`, `y = 0` with per-block scales from the data norms.
fn default_start<T: Scalar>(pr: &Prepared<T>) -> (Vec<Matrix<T>>, Vec<T>, Vec<Matrix<T>>) {
    let ten = T::lit(10.0);
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    for (blk, &s) in pr.sizes.iter().enumerate() {
        let n = T::from_usize_lossy(s);
        let mut xi = ten.max(n.sqrt());
        let mut zeta = ten.max(n.sqrt()).max(pr.c[blk].frobenius_norm());
        for (i, pairs) in &pr.cons[blk] {
            let a_norm = pairs.iter().map(|&(_, _, u)| u * u).sum::<T>().sqrt();
            xi = xi.max(n * (T::one() + pr.b[*i].abs()) / (T::one() + a_norm));
            zeta = zeta.max(a_norm);
        }
        xs.push(Matrix::identity(s).scale(xi));
        zs.push(Matrix::identity(s).scale(zeta));
    }
    (xs, vec![T::zero(); pr.m()], zs)
}
