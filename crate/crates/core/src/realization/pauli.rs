use num_complex::Complex;

use crate::error::{cap_check, Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Scalar;

/// `i^phase · X^x · Z^z` on `qubits` qubits. Qubit 1 is the most significant
/// bit of a basis index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub phase: u8,
    pub x: u64,
    pub z: u64,
    pub qubits: usize,
}

impl PauliString {
    pub fn identity(qubits: usize) -> Self {
        Self {
            phase: 0,
            x: 0,
            z: 0,
            qubits,
        }
    }

    /// Bit mask of qubit `j` (1-based).
    #[inline]
    fn bit(qubits: usize, j: usize) -> u64 {
        1 << (qubits - j)
    }

    /// Jordan–Wigner Majorana operator `Γ_index` (1-based):
    /// `Γ_{2j-1} = Z⋯Z X_j`, `Γ_{2j} = Z⋯Z Y_j`.
    pub fn majorana(index: usize, qubits: usize) -> Result<Self> {
        if index == 0 || index > 2 * qubits || qubits > 64 {
            return Err(Error::IndexOutOfRange {
                index,
                modes: 2 * qubits,
            });
        }
        let j = index.div_ceil(2);
        let string: u64 = (1..j).map(|k| Self::bit(qubits, k)).fold(0, |a, b| a | b);
        let xj = Self::bit(qubits, j);
        Ok(if index % 2 == 1 {
            Self {
                phase: 0,
                x: xj,
                z: string,
                qubits,
            }
        } else {
            // Y = i X Z
            Self {
                phase: 1,
                x: xj,
                z: string | xj,
                qubits,
            }
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        let swap = 2 * (self.z & other.x).count_ones();
        Self {
            phase: ((self.phase as u32 + other.phase as u32 + swap) % 4) as u8,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            qubits: self.qubits,
        }
    }

    pub fn anticommutes(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 1
    }

    pub fn dimension(&self) -> usize {
        1 << self.qubits
    }

    /// Dense matrix; column `b` has its single entry in row `b ⊕ x`.
    pub fn to_matrix<T: Scalar>(&self, max_qubits: usize) -> Result<CMatrix<T>> {
        cap_check("qubit count", self.qubits as u128, max_qubits as u128)?;
        let d = self.dimension();
        let units = [
            Complex::new(T::one(), T::zero()),
            Complex::new(T::zero(), T::one()),
            Complex::new(-T::one(), T::zero()),
            Complex::new(T::zero(), -T::one()),
        ];
        let mut m = CMatrix::zeros(d, d);
        for b in 0..d as u64 {
            let sign = 2 * ((self.z & b).count_ones() % 2);
            let p = (self.phase as u32 + sign) % 4;
            m[((b ^ self.x) as usize, b as usize)] = units[p as usize];
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majoranas_anticommute_pairwise() {
        let q = 3;
        let g: Vec<PauliString> = (1..=6)
            .map(|i| PauliString::majorana(i, q).unwrap())
            .collect();
        for i in 0..6 {
            assert_eq!(g[i].mul(&g[i]), PauliString::identity(q));
            for j in i + 1..6 {
                assert!(g[i].anticommutes(&g[j]));
            }
        }
        assert!(PauliString::majorana(7, q).is_err());
    }

    #[test]
    fn product_rule_matches_matrices() {
        let q = 2;
        let a = PauliString::majorana(2, q).unwrap();
        let b = PauliString::majorana(3, q).unwrap();
        let ab = a.mul(&b).to_matrix::<f64>(13).unwrap();
        let direct = a
            .to_matrix::<f64>(13)
            .unwrap()
            .matmul(&b.to_matrix(13).unwrap());
        assert!(ab.sub(&direct).max_abs() < 1e-15);
    }

    #[test]
    fn single_qubit_conventions() {
        let x = PauliString::majorana(1, 1)
            .unwrap()
            .to_matrix::<f64>(13)
            .unwrap();
        assert_eq!(x[(0, 1)], Complex::new(1.0, 0.0));
        assert_eq!(x[(0, 0)], Complex::new(0.0, 0.0));
        let y = PauliString::majorana(2, 1)
            .unwrap()
            .to_matrix::<f64>(13)
            .unwrap();
        assert_eq!(y[(0, 1)], Complex::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], Complex::new(0.0, 1.0));
    }
}
