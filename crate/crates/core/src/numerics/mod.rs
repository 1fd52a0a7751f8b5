//! Dense real/complex linear algebra, SVD, unitary DFT oracles and index
//! utilities. Everything downstream is checked against this layer.

mod dft;
mod matrix;
pub mod random;
mod svd;

pub use dft::{
    centered_frequency, dft_matrix, fft2_oracle, fft2_real, frequency_bin, ifft2_oracle,
};
pub use matrix::{ComplexField, RealMatrix};
pub use svd::{svd, SvdResult};

use crate::error::{Error, Result};

/// Shared numerical tolerances.
pub mod tol {
    /// Orthogonality of SVD factors and reconstruction error.
    pub const ORTHOGONALITY: f64 = 1e-10;
    /// DFT identities (unitarity, oracle agreement).
    pub const DFT: f64 = 1e-12;
    /// `‖SΩSᵀ − Ω‖∞` for constructed symplectic matrices.
    pub const SYMPLECTIC: f64 = 1e-10;
    /// Accepted deviation from unitarity for gate/interferometer inputs.
    pub const UNITARITY: f64 = 1e-10;
    /// Lower bound on the minimum eigenvalue of `cov + iΩ` is `-PHYSICALITY`.
    pub const PHYSICALITY: f64 = 1e-9;
    /// Covariance symmetry.
    pub const SYMMETRY: f64 = 1e-12;
}

pub fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// `π(j)` = `j` with its `log₂ n` bits reversed.
pub fn bit_reversal_permutation(n: usize) -> Result<Vec<usize>> {
    if !is_power_of_two(n) {
        return Err(Error::InvalidSize(format!(
            "bit reversal needs a power-of-two length, got {n}"
        )));
    }
    let bits = n.trailing_zeros();
    if bits == 0 {
        return Ok(vec![0]);
    }
    Ok((0..n)
        .map(|j| j.reverse_bits() >> (usize::BITS - bits))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_reversal_examples() {
        assert_eq!(bit_reversal_permutation(1).unwrap(), vec![0]);
        assert_eq!(bit_reversal_permutation(2).unwrap(), vec![0, 1]);
        assert_eq!(bit_reversal_permutation(4).unwrap(), vec![0, 2, 1, 3]);
        assert_eq!(
            bit_reversal_permutation(8).unwrap(),
            vec![0, 4, 2, 6, 1, 5, 3, 7]
        );
    }

    #[test]
    fn bit_reversal_is_an_involution() {
        for n in [2, 4, 8, 16, 32, 64] {
            let p = bit_reversal_permutation(n).unwrap();
            assert!((0..n).all(|j| p[p[j]] == j));
        }
    }

    #[test]
    fn bit_reversal_rejects_non_powers() {
        for n in [0, 3, 6, 12] {
            assert!(matches!(
                bit_reversal_permutation(n),
                Err(Error::InvalidSize(_))
            ));
        }
    }
}
