//! Seeded random test data: uniform matrices and Haar-like unitaries.

use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::{ComplexField, RealMatrix};

pub fn random_matrix(
    rows: usize,
    cols: usize,
    range: Range<f64>,
    rng: &mut impl Rng,
) -> RealMatrix {
    RealMatrix::from_fn(rows, cols, |_, _| rng.random_range(range.clone()))
}

/// Unitary from Gram–Schmidt on a complex Gaussian matrix, with the column
/// phases fixed by the QR convention so the distribution is Haar.
pub fn random_unitary(l: usize, rng: &mut impl Rng) -> ComplexField {
    let mut cols: Vec<Vec<Complex64>> = (0..l)
        .map(|_| {
            (0..l)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    for j in 0..l {
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..l).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                let basis = cols[k].clone();
                for (x, b) in cols[j].iter_mut().zip(&basis) {
                    *x -= proj * b;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    ComplexField::from_fn(l, l, |i, j| cols[j][i])
}

/// Uniform `[-1, 1)` matrix from a ChaCha8 stream seeded with `seed`.
pub fn seeded_matrix(rows: usize, cols: usize, seed: u64) -> RealMatrix {
    random_matrix(rows, cols, -1.0..1.0, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn seeded_unitary(l: usize, seed: u64) -> ComplexField {
    random_unitary(l, &mut ChaCha8Rng::seed_from_u64(seed))
}
