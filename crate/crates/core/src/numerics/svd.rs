//! One-sided Jacobi singular value decomposition.
//!
//! Columns of a working copy of `A` are orthogonalised pairwise by plane
//! rotations that are accumulated into `V`. At convergence the column norms
//! are the singular values and the normalised columns are the left singular
//! vectors. `U` and `V` are returned square (full), completed to orthonormal
//! bases where `A` is rectangular or rank deficient.

use super::matrix::RealMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// `D = U · diag(σ) · Vᵀ` with square orthogonal `U` (m×m), `V` (n×n) and
/// `min(m, n)` singular values in descending order.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub u: RealMatrix,
    pub singular_values: Vec<f64>,
    pub v: RealMatrix,
}

impl SvdResult {
    /// `U · Σ · Vᵀ` with `Σ` the rectangular diagonal matrix.
    pub fn reconstruct(&self) -> RealMatrix {
        let m = self.u.rows();
        let n = self.v.rows();
        RealMatrix::from_fn(m, n, |i, j| {
            self.singular_values
                .iter()
                .enumerate()
                .map(|(k, s)| self.u[(i, k)] * s * self.v[(j, k)])
                .sum()
        })
    }

    /// Rectangular `m × n` diagonal matrix of singular values.
    pub fn sigma_matrix(&self) -> RealMatrix {
        let m = self.u.rows();
        let n = self.v.rows();
        RealMatrix::from_fn(
            m,
            n,
            |i, j| {
                if i == j {
                    self.singular_values[i]
                } else {
                    0.0
                }
            },
        )
    }

    pub fn max_singular_value(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }
}

pub fn svd(d: &RealMatrix) -> Result<SvdResult> {
    let (m, n) = d.shape();
    if m == 0 || n == 0 {
        return Err(Error::InvalidSize(format!(
            "cannot factor an empty {m}x{n} matrix"
        )));
    }
    if d.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(
            "SVD input has non-finite entries".into(),
        ));
    }
    if m < n {
        // A = U Σ Vᵀ  ⇔  Aᵀ = V Σ Uᵀ
        let t = tall_svd(&d.transpose(), (m, n))?;
        return Ok(SvdResult {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    tall_svd(d, (m, n))
}

/// SVD for `rows ≥ cols`. `shape` is the caller's original shape, used only in
/// error messages.
fn tall_svd(a: &RealMatrix, shape: (usize, usize)) -> Result<SvdResult> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);

    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let eps = f64::EPSILON;
    // Columns at the rounding floor of ‖A‖ are numerically zero; rotating them
    // against each other only shuffles noise and never settles.
    let frob_sq: f64 = a.as_slice().iter().map(|x| x * x).sum();
    let floor = (m as f64 * eps).powi(2) * frob_sq;
    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0
                    || gamma.abs() <= eps * (alpha * beta).sqrt()
                    || alpha.min(beta) <= floor
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::SvdNonConvergence {
            rows: shape.0,
            cols: shape.1,
            sweeps: MAX_SWEEPS,
        });
    }

    let norms: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma_max = norms[order[0]];
    let rank_tol = sigma_max * (m as f64) * eps;

    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(m);
    for &j in &order {
        if norms[j] > rank_tol && norms[j] > 0.0 {
            u_cols.push(cols[j].iter().map(|x| x / norms[j]).collect());
        } else {
            break;
        }
    }
    // Columns for zero singular values and the m − n complement are arbitrary
    // orthonormal completions.
    let u_cols = complete_basis(u_cols, m);
    let v_cols: Vec<Vec<f64>> = order.iter().map(|&j| v[j].clone()).collect();

    Ok(SvdResult {
        u: from_columns(&u_cols, m),
        singular_values,
        v: from_columns(&v_cols, n),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

/// Extends orthonormal columns to a basis of `R^dim`, greedily picking the
/// canonical vector with the largest residual after re-orthogonalisation.
fn complete_basis(mut basis: Vec<Vec<f64>>, dim: usize) -> Vec<Vec<f64>> {
    while basis.len() < dim {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for e in 0..dim {
            let mut cand = vec![0.0; dim];
            cand[e] = 1.0;
            for _ in 0..2 {
                for b in &basis {
                    let proj = dot(&cand, b);
                    for (c, bi) in cand.iter_mut().zip(b) {
                        *c -= proj * bi;
                    }
                }
            }
            let norm = dot(&cand, &cand).sqrt();
            if best.as_ref().is_none_or(|(n, _)| norm > *n) {
                best = Some((norm, cand));
            }
        }
        let (norm, cand) = best.expect("dim > 0");
        basis.push(cand.into_iter().map(|x| x / norm).collect());
    }
    basis
}

fn from_columns(cols: &[Vec<f64>], rows: usize) -> RealMatrix {
    RealMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}
