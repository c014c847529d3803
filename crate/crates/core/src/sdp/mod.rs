//! Small dense semidefinite programs in standard form
//!
//! ```text
//! minimize  Σ_b ⟨C_b, X_b⟩   s.t.  Σ_b ⟨A_{i,b}, X_b⟩ = b_i,   X_b ⪰ 0
//! maximize  bᵀy              s.t.  Z_b = C_b − Σ_i y_i A_{i,b} ⪰ 0
//! ```
//!
//! Blocks are real symmetric or complex Hermitian; complex blocks are solved
//! through the real embedding `[[R, −I], [I, R]]`. Size-one real blocks act as
//! nonnegative LP variables, and free scalars are split into two of them.

mod solver;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{cap_check, Error, Result};
use crate::linalg::{CMatrix, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    Real,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub size: usize,
    pub kind: BlockKind,
}

impl Block {
    fn real_size(&self) -> usize {
        match self.kind {
            BlockKind::Real => self.size,
            BlockKind::Complex => 2 * self.size,
        }
    }
}

/// Coefficient `value` at `(row, col)` of a Hermitian coefficient matrix; the
/// mirrored entry `(col, row)` is implied (conjugated).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entry<T> {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: Complex<T>,
}

impl<T: Scalar> Entry<T> {
    pub fn real(block: usize, row: usize, col: usize, value: T) -> Self {
        Self {
            block,
            row,
            col,
            value: Complex::new(value, T::zero()),
        }
    }

    pub fn complex(block: usize, row: usize, col: usize, value: Complex<T>) -> Self {
        Self {
            block,
            row,
            col,
            value,
        }
    }
}

/// Handle to a free scalar variable, stored as `x⁺ − x⁻`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeVar {
    plus: usize,
    minus: usize,
}

impl FreeVar {
    /// Entries contributing `coef · x` to a linear form.
    pub fn entries<T: Scalar>(&self, coef: T) -> [Entry<T>; 2] {
        [
            Entry::real(self.plus, 0, 0, coef),
            Entry::real(self.minus, 0, 0, -coef),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct Constraint<T> {
    pub entries: Vec<Entry<T>>,
    pub rhs: T,
}

#[derive(Clone, Debug, Default)]
pub struct SdpProblem<T> {
    blocks: Vec<Block>,
    objective: Vec<Entry<T>>,
    constraints: Vec<Constraint<T>>,
}

impl<T: Scalar> SdpProblem<T> {
    pub fn new() -> Self {
        Self {
            blocks: Vec::new(),
            objective: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn add_block(&mut self, size: usize, kind: BlockKind) -> usize {
        self.blocks.push(Block { size, kind });
        self.blocks.len() - 1
    }

    pub fn add_free_variable(&mut self) -> FreeVar {
        FreeVar {
            plus: self.add_block(1, BlockKind::Real),
            minus: self.add_block(1, BlockKind::Real),
        }
    }

    pub fn add_objective(&mut self, entry: Entry<T>) {
        self.objective.push(entry);
    }

    pub fn add_constraint(&mut self, entries: Vec<Entry<T>>, rhs: T) {
        self.constraints.push(Constraint { entries, rhs });
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn objective(&self) -> &[Entry<T>] {
        &self.objective
    }

    /// Sum of squared block sizes after the real embedding.
    pub fn real_dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.real_size().pow(2)).sum()
    }

    fn validate(&self) -> Result<()> {
        let check = |e: &Entry<T>| -> Result<()> {
            let b = self.blocks.get(e.block).ok_or_else(|| {
                Error::InvalidInput(format!("entry refers to missing block {}", e.block))
            })?;
            if e.row >= b.size || e.col >= b.size {
                return Err(Error::InvalidInput(format!(
                    "entry ({}, {}) outside block {} of size {}",
                    e.row, e.col, e.block, b.size
                )));
            }
            let real_only = b.kind == BlockKind::Real || e.row == e.col;
            if real_only && e.value.im != T::zero() {
                return Err(Error::InvalidInput(format!(
                    "imaginary coefficient at ({}, {}) of block {} is not Hermitian",
                    e.row, e.col, e.block
                )));
            }
            Ok(())
        };
        self.objective.iter().try_for_each(check)?;
        self.constraints
            .iter()
            .flat_map(|c| c.entries.iter())
            .try_for_each(check)
    }
}

/// Dense primal start (per block, in the block's own kind) and dual start.
#[derive(Clone, Debug)]
pub struct StartPoint<T> {
    pub x: Vec<BlockValue<T>>,
    pub y: Vec<T>,
    pub z: Vec<BlockValue<T>>,
}

#[derive(Clone, Debug)]
pub enum BlockValue<T> {
    Real(Matrix<T>),
    Complex(CMatrix<T>),
}

impl<T: Scalar> BlockValue<T> {
    pub fn as_real(&self) -> Option<&Matrix<T>> {
        match self {
            BlockValue::Real(m) => Some(m),
            BlockValue::Complex(_) => None,
        }
    }

    pub fn to_complex(&self) -> CMatrix<T> {
        match self {
            BlockValue::Real(m) => CMatrix::from_fn(m.rows(), m.cols(), |i, j| {
                Complex::new(m[(i, j)], T::zero())
            }),
            BlockValue::Complex(c) => c.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdpOptions<T> {
    /// Relative duality gap `|p − d| / (1 + |p| + |d|)`.
    pub gap_tol: T,
    /// Relative primal and dual residuals.
    pub feas_tol: T,
    pub max_iter: usize,
    /// Mehrotra predictor–corrector; otherwise a fixed centering parameter.
    pub predictor_corrector: bool,
    /// Fraction-to-boundary factor.
    pub step_fraction: T,
    pub record_history: bool,
    pub start: Option<StartPoint<T>>,
}

impl<T: Scalar> Default for SdpOptions<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        // 1e-9 in f64, ~1e-4 in f32
        let tol = T::lit(1e-9).max(eps.sqrt() * T::lit(0.5));
        Self {
            gap_tol: tol,
            feas_tol: tol,
            max_iter: 100,
            predictor_corrector: true,
            step_fraction: T::lit(0.98),
            record_history: false,
            start: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SdpStatus {
    Optimal,
    MaxIter,
    InfeasibleDetected,
    NumericalBreakdown,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IterateRecord<T> {
    pub primal: T,
    pub dual: T,
    pub primal_residual: T,
    pub dual_residual: T,
    pub mu: T,
}

#[derive(Clone, Debug)]
pub struct SdpSolution<T> {
    /// `⟨C, X⟩`.
    pub primal_value: T,
    /// `bᵀy`.
    pub dual_value: T,
    /// `|primal − dual|`.
    pub gap: T,
    pub x: Vec<BlockValue<T>>,
    pub z: Vec<BlockValue<T>>,
    pub y: Vec<T>,
    pub primal_residual: T,
    pub dual_residual: T,
    pub iterations: usize,
    pub status: SdpStatus,
    pub history: Vec<IterateRecord<T>>,
}

impl<T: Scalar> SdpSolution<T> {
    pub fn free_value(&self, v: FreeVar) -> T {
        let get = |b: usize| self.x[b].as_real().map_or(T::zero(), |m| m[(0, 0)]);
        get(v.plus) - get(v.minus)
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }

    /// Converts a non-optimal result into a solver error carrying its bounds.
    pub fn require_optimal(self) -> Result<Self> {
        if self.is_optimal() {
            Ok(self)
        } else {
            Err(Error::SolverFailure {
                status: format!("{:?}", self.status),
                primal: self.primal_value.to_f64_lossy(),
                dual: self.dual_value.to_f64_lossy(),
            })
        }
    }
}

/// Solves `p` by primal–dual path following.
pub fn solve<T: Scalar>(
    p: &SdpProblem<T>,
    opts: &SdpOptions<T>,
    caps: &Caps,
) -> Result<SdpSolution<T>> {
    p.validate()?;
    cap_check(
        "SDP dimension",
        p.real_dimension() as u128,
        caps.max_sdp_dim as u128,
    )?;
    solver::run(p, opts)
}
