use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::symplectic::{omega, quadrature_indices, validate_modes, SymplecticMatrix};
use crate::error::{Error, Result};
use crate::numerics::tol::PHYSICALITY;
use crate::numerics::RealMatrix;

/// Two registers of a bipartite state: `r₁` holds modes `0..m` (matrix rows),
/// `r₂` holds modes `m..m+n` (matrix columns).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    pub m: usize,
    pub n: usize,
}

impl RegisterLayout {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidSize(format!(
                "both registers need at least one mode, got m = {m}, n = {n}"
            )));
        }
        Ok(Self { m, n })
    }

    pub fn total_modes(&self) -> usize {
        self.m + self.n
    }

    pub fn row_modes(&self) -> Vec<usize> {
        (0..self.m).collect()
    }

    pub fn col_modes(&self) -> Vec<usize> {
        (self.m..self.m + self.n).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalityReport {
    pub is_physical: bool,
    /// Smallest eigenvalue of the Hermitian matrix `cov + iΩ`.
    pub min_eigenvalue: f64,
}

/// First and second moments of an `n`-mode Gaussian state, `xxpp` ordering,
/// `ħ = 2` (vacuum covariance is the identity).
///
/// Gates mutate the state in place; clone it to keep a snapshot.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    num_modes: usize,
    pub(crate) mean: Vec<f64>,
    pub(crate) cov: RealMatrix,
}

impl GaussianState {
    pub fn vacuum(num_modes: usize) -> Result<Self> {
        if num_modes == 0 {
            return Err(Error::InvalidSize("a state needs at least one mode".into()));
        }
        Ok(Self {
            num_modes,
            mean: vec![0.0; 2 * num_modes],
            cov: RealMatrix::identity(2 * num_modes),
        })
    }

    /// Builds a state from raw moments. Shape and symmetry are checked;
    /// physicality is not (see [`Self::check_physicality`]).
    pub fn from_moments(mean: Vec<f64>, cov: RealMatrix) -> Result<Self> {
        if cov.rows() == 0 || !cov.is_square() || !cov.rows().is_multiple_of(2) {
            return Err(Error::InvalidSize(format!(
                "covariance must be 2n x 2n, got {}x{}",
                cov.rows(),
                cov.cols()
            )));
        }
        if mean.len() != cov.rows() {
            return Err(Error::DimensionMismatch {
                expected: format!("mean of length {}", cov.rows()),
                actual: format!("length {}", mean.len()),
            });
        }
        let asym = cov.max_abs_diff(&cov.transpose());
        if asym > crate::numerics::tol::SYMMETRY {
            return Err(Error::InvalidParameter(format!(
                "covariance is not symmetric (max asymmetry {asym:e})"
            )));
        }
        Ok(Self {
            num_modes: cov.rows() / 2,
            mean,
            cov,
        })
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn cov(&self) -> &RealMatrix {
        &self.cov
    }

    /// `μ ← S μ`, `σ ← S σ Sᵀ`, followed by symmetrisation of the touched
    /// rows and columns.
    pub fn apply_symplectic(&mut self, s: &SymplecticMatrix) -> Result<()> {
        if s.num_modes() != self.num_modes {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{} symplectic", 2 * self.num_modes, 2 * self.num_modes),
                actual: format!("{}x{}", s.dim(), s.dim()),
            });
        }
        let idx = s.quadrature_indices();
        if idx.is_empty() {
            return Ok(());
        }
        self.transform_rows_cols(&idx, s.local_block());
        Ok(())
    }

    /// Applies the linear map `block` to the quadrature subset `idx` (rows and
    /// columns of the covariance, entries of the mean).
    pub(crate) fn transform_rows_cols(&mut self, idx: &[usize], block: &RealMatrix) {
        let dim = 2 * self.num_modes;
        let q = idx.len();

        let old_mean: Vec<f64> = idx.iter().map(|&i| self.mean[i]).collect();
        for (a, &ia) in idx.iter().enumerate() {
            self.mean[ia] = (0..q).map(|b| block[(a, b)] * old_mean[b]).sum();
        }

        // rows: σ[idx, :] ← B · σ[idx, :]
        let old_rows: Vec<Vec<f64>> = idx.iter().map(|&i| self.cov.row(i).to_vec()).collect();
        for (a, &ia) in idx.iter().enumerate() {
            for col in 0..dim {
                let mut acc = 0.0;
                for (b, row) in old_rows.iter().enumerate() {
                    acc += block[(a, b)] * row[col];
                }
                self.cov[(ia, col)] = acc;
            }
        }
        // columns: σ[:, idx] ← σ[:, idx] · Bᵀ
        let mut buf = vec![0.0; q];
        for row in 0..dim {
            for (b, &ib) in idx.iter().enumerate() {
                buf[b] = self.cov[(row, ib)];
            }
            for (a, &ia) in idx.iter().enumerate() {
                self.cov[(row, ia)] = (0..q).map(|b| block[(a, b)] * buf[b]).sum();
            }
        }
        self.symmetrize_indices(idx);
    }

    pub(crate) fn symmetrize_indices(&mut self, idx: &[usize]) {
        let dim = 2 * self.num_modes;
        for &i in idx {
            for j in 0..dim {
                let avg = 0.5 * (self.cov[(i, j)] + self.cov[(j, i)]);
                self.cov[(i, j)] = avg;
                self.cov[(j, i)] = avg;
            }
        }
    }

    /// Minimum eigenvalue of the Hermitian matrix `cov + iΩ` against the
    /// `−1e-9` floor.
    pub fn check_physicality(&self) -> PhysicalityReport {
        let dim = 2 * self.num_modes;
        let om = omega(self.num_modes);
        let h = DMatrix::from_fn(dim, dim, |i, j| {
            Complex64::new(self.cov[(i, j)], om[(i, j)])
        });
        let min_eigenvalue = SymmetricEigen::new(h)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        PhysicalityReport {
            is_physical: min_eigenvalue >= -PHYSICALITY,
            min_eigenvalue,
        }
    }

    /// Like [`Self::check_physicality`] but as a `Result`.
    pub fn ensure_physical(&self) -> Result<()> {
        let report = self.check_physicality();
        if report.is_physical {
            Ok(())
        } else {
            Err(Error::Unphysical {
                min_eigenvalue: report.min_eigenvalue,
            })
        }
    }

    /// Marginal state of the listed modes (in the given order).
    pub fn reduced(&self, modes: &[usize]) -> Result<GaussianState> {
        validate_modes(modes, self.num_modes)?;
        if modes.is_empty() {
            return Err(Error::InvalidSize(
                "reduced state needs at least one mode".into(),
            ));
        }
        let idx = quadrature_indices(modes, self.num_modes);
        Ok(GaussianState {
            num_modes: modes.len(),
            mean: idx.iter().map(|&i| self.mean[i]).collect(),
            cov: self.cov.select(&idx, &idx),
        })
    }

    /// Symplectic eigenvalues `ν_k ≥ 1` (ħ = 2), ascending.
    ///
    /// With `A = σ^{1/2}` and `K = A Ω A` (antisymmetric), `KᵀK` has each
    /// `ν_k²` as a doubly degenerate eigenvalue.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let dim = 2 * self.num_modes;
        let sigma = DMatrix::from_fn(dim, dim, |i, j| self.cov[(i, j)]);
        let eig = SymmetricEigen::new(sigma);
        let sqrt_vals = eig.eigenvalues.map(|x| x.max(0.0).sqrt());
        let a =
            &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
        let om = omega(self.num_modes);
        let om = DMatrix::from_fn(dim, dim, |i, j| om[(i, j)]);
        let k = &a * om * &a;
        let ktk = k.transpose() * &k;
        let ktk = (&ktk + ktk.transpose()) * 0.5;
        let mut sq: Vec<f64> = SymmetricEigen::new(ktk)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        sq.sort_by(f64::total_cmp);
        sq.chunks(2)
            .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
            .collect()
    }

    /// von Neumann entropy (nats) of the whole state, from its symplectic
    /// eigenvalues. For a marginal this is the entanglement entropy with the
    /// complement when the global state is pure.
    pub fn entropy(&self) -> f64 {
        self.symplectic_eigenvalues()
            .into_iter()
            .map(|nu| {
                let plus = 0.5 * (nu + 1.0);
                let minus = 0.5 * (nu - 1.0);
                let term = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
                term(plus) - term(minus)
            })
            .sum()
    }

    pub fn cov_determinant(&self) -> f64 {
        let dim = 2 * self.num_modes;
        DMatrix::from_fn(dim, dim, |i, j| self.cov[(i, j)]).determinant()
    }

    fn check_layout(&self, layout: RegisterLayout) -> Result<()> {
        if layout.total_modes() != self.num_modes {
            return Err(Error::DimensionMismatch {
                expected: format!(
                    "{} modes for layout {}+{}",
                    layout.total_modes(),
                    layout.m,
                    layout.n
                ),
                actual: format!("{} modes", self.num_modes),
            });
        }
        Ok(())
    }

    fn inter_register_block(&self, layout: RegisterLayout, row_p: bool, col_p: bool) -> RealMatrix {
        let total = self.num_modes;
        let row0 = if row_p { total } else { 0 };
        let col0 = layout.m + if col_p { total } else { 0 };
        self.cov.submatrix(row0, col0, layout.m, layout.n)
    }

    /// Inter-register blocks `(σ_{x_{r₁} x_{r₂}}, σ_{x_{r₁} p_{r₂}})`, both `m × n`.
    pub fn cross_blocks(&self, layout: RegisterLayout) -> Result<(RealMatrix, RealMatrix)> {
        self.check_layout(layout)?;
        Ok((
            self.inter_register_block(layout, false, false),
            self.inter_register_block(layout, false, true),
        ))
    }

    /// The remaining inter-register blocks `(σ_{p_{r₁} x_{r₂}}, σ_{p_{r₁} p_{r₂}})`.
    pub fn redundant_cross_blocks(
        &self,
        layout: RegisterLayout,
    ) -> Result<(RealMatrix, RealMatrix)> {
        self.check_layout(layout)?;
        Ok((
            self.inter_register_block(layout, true, false),
            self.inter_register_block(layout, true, true),
        ))
    }
}
