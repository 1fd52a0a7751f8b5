//! Unitary DFT matrices and the dense two-dimensional DFT used as the
//! classical reference for every circuit-level transform.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::matrix::{ComplexField, RealMatrix};
use crate::error::{Error, Result};

/// `(F_l)_{kj} = e^{−2πi jk/l} / √l`.
pub fn dft_matrix(l: usize) -> Result<ComplexField> {
    if l == 0 {
        return Err(Error::InvalidSize("DFT size must be at least 1".into()));
    }
    let norm = 1.0 / (l as f64).sqrt();
    Ok(ComplexField::from_fn(l, l, |k, j| {
        // reduce jk mod l before scaling so large products keep full precision
        let phase = -2.0 * PI * ((j * k) % l) as f64 / l as f64;
        Complex64::from_polar(norm, phase)
    }))
}

/// `M̂ = F_m · M · F_nᵀ`.
pub fn fft2_oracle(m: &ComplexField) -> ComplexField {
    let (rows, cols) = m.shape();
    let fm = dft_matrix(rows).expect("non-empty field");
    let fn_t = dft_matrix(cols).expect("non-empty field").transpose();
    fm.matmul(m)
        .and_then(|x| x.matmul(&fn_t))
        .expect("shapes agree by construction")
}

/// Inverse of [`fft2_oracle`]: `M = F_m† · M̂ · conj(F_n)`.
pub fn ifft2_oracle(spectrum: &ComplexField) -> ComplexField {
    let (rows, cols) = spectrum.shape();
    let fm_adj = dft_matrix(rows).expect("non-empty field").adjoint();
    let fn_conj = dft_matrix(cols).expect("non-empty field").conj();
    fm_adj
        .matmul(spectrum)
        .and_then(|x| x.matmul(&fn_conj))
        .expect("shapes agree by construction")
}

pub fn fft2_real(m: &RealMatrix) -> ComplexField {
    fft2_oracle(&ComplexField::from_real(m))
}

/// Signed integer frequency of FFT bin `i` on an `n`-point grid: `i` for
/// `i ≤ n/2`, `i − n` otherwise.
pub fn centered_frequency(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// FFT bin holding the signed frequency `k` on an `n`-point grid.
pub fn frequency_bin(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::random_matrix;
    use crate::numerics::tol::DFT;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Direct O((mn)²) double sum, independent of the matrix-product route.
    fn naive_dft2(m: &ComplexField) -> ComplexField {
        let (rows, cols) = m.shape();
        let norm = 1.0 / ((rows * cols) as f64).sqrt();
        ComplexField::from_fn(rows, cols, |k, l| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..rows {
                for j in 0..cols {
                    let phase =
                        -2.0 * PI * ((i * k) as f64 / rows as f64 + (j * l) as f64 / cols as f64);
                    acc += m[(i, j)] * Complex64::from_polar(1.0, phase);
                }
            }
            acc * norm
        })
    }

    #[test]
    fn small_dft_matrices() {
        let f1 = dft_matrix(1).unwrap();
        assert_eq!(f1[(0, 0)], Complex64::new(1.0, 0.0));

        let f2 = dft_matrix(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [h, h, h, -h];
        for (z, e) in f2.as_slice().iter().zip(expected) {
            assert!((z - Complex64::new(e, 0.0)).norm() < DFT);
        }
        assert!(dft_matrix(0).is_err());
    }

    #[test]
    fn dft8_row_one_is_the_kernel() {
        let f8 = dft_matrix(8).unwrap();
        for j in 0..8 {
            let expected = Complex64::from_polar(1.0 / 8f64.sqrt(), -2.0 * PI * j as f64 / 8.0);
            assert!((f8[(1, j)] - expected).norm() < DFT);
        }
    }

    #[test]
    fn unitary_for_all_sizes_to_64() {
        for l in 1..=64 {
            let f = dft_matrix(l).unwrap();
            assert!(f.unitarity_deviation() < DFT, "l = {l}");
        }
    }

    #[test]
    fn impulse_and_zero() {
        let mut delta = ComplexField::zeros(4, 4);
        delta[(0, 0)] = Complex64::new(1.0, 0.0);
        let spec = fft2_oracle(&delta);
        for z in spec.as_slice() {
            assert!((z - Complex64::new(0.25, 0.0)).norm() < DFT);
        }
        assert_eq!(fft2_oracle(&ComplexField::zeros(2, 4)).max_abs(), 0.0);
    }

    #[test]
    fn matches_double_sum_up_to_8x8() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for rows in 1..=8 {
            for cols in 1..=8 {
                let m = ComplexField::from_parts(
                    &random_matrix(rows, cols, -1.0..1.0, &mut rng),
                    &random_matrix(rows, cols, -1.0..1.0, &mut rng),
                )
                .unwrap();
                let err = fft2_oracle(&m).max_abs_diff(&naive_dft2(&m));
                assert!(err < DFT, "{rows}x{cols}: {err:e}");
            }
        }
    }

    #[test]
    fn separable_outer_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_matrix(4, 1, -1.0..1.0, &mut rng);
        let v = random_matrix(8, 1, -1.0..1.0, &mut rng);
        let m = u.matmul(&v.transpose()).unwrap();
        let fu = dft_matrix(4)
            .unwrap()
            .matmul(&ComplexField::from_real(&u))
            .unwrap();
        let fv = dft_matrix(8)
            .unwrap()
            .matmul(&ComplexField::from_real(&v))
            .unwrap();
        let expected = fu.matmul(&fv.transpose()).unwrap();
        assert!(fft2_real(&m).max_abs_diff(&expected) < DFT);
        assert!(naive_dft2(&ComplexField::from_real(&m)).max_abs_diff(&expected) < DFT);
    }

    #[test]
    fn parseval_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (r, c) in [(1, 1), (3, 5), (8, 8), (16, 4)] {
            let m = ComplexField::from_real(&random_matrix(r, c, -2.0..2.0, &mut rng));
            let spec = fft2_oracle(&m);
            assert!((spec.frobenius_norm() - m.frobenius_norm()).abs() < DFT);
            assert!(ifft2_oracle(&spec).max_abs_diff(&m) < DFT);
        }
    }

    #[test]
    fn centered_frequency_round_trip() {
        assert_eq!(centered_frequency(0, 8), 0);
        assert_eq!(centered_frequency(4, 8), 4);
        assert_eq!(centered_frequency(5, 8), -3);
        assert_eq!(centered_frequency(7, 8), -1);
        for n in [1, 2, 8, 64] {
            for i in 0..n {
                assert_eq!(frequency_bin(centered_frequency(i, n), n), i);
            }
        }
    }
}
