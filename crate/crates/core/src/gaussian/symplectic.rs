use crate::error::{Error, Result};
use crate::numerics::tol::UNITARITY;
use crate::numerics::{ComplexField, RealMatrix};

/// Block symplectic form `Ω = [[0, I], [−I, 0]]` for `n` modes in `xxpp`
/// ordering.
pub fn omega(num_modes: usize) -> RealMatrix {
    let n = num_modes;
    RealMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i < n && j == i + n {
            1.0
        } else if i >= n && j + n == i {
            -1.0
        } else {
            0.0
        }
    })
}

/// Quadrature indices `(x_{m₀}, …, x_{m_{k−1}}, p_{m₀}, …, p_{m_{k−1}})` of a
/// list of modes in an `n`-mode `xxpp` vector.
pub fn quadrature_indices(modes: &[usize], num_modes: usize) -> Vec<usize> {
    modes
        .iter()
        .copied()
        .chain(modes.iter().map(|&m| m + num_modes))
        .collect()
}

/// Real `2n × 2n` phase-space map of a Gaussian unitary on `n` modes.
///
/// Stored by support: a `2k × 2k` block in local `xxpp` order acting on `k`
/// listed modes, identity elsewhere. Gates touch one or two modes, so
/// applying them costs `O(n)` instead of a dense `O(n³)` product.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix {
    num_modes: usize,
    modes: Vec<usize>,
    block: RealMatrix,
}

impl SymplecticMatrix {
    pub fn identity(num_modes: usize) -> Self {
        Self {
            num_modes,
            modes: Vec::new(),
            block: RealMatrix::zeros(0, 0),
        }
    }

    /// Embeds a local `2k × 2k` block acting on `modes` (distinct, in range).
    /// Does not check the symplectic condition; see [`Self::defect`].
    pub fn embed(num_modes: usize, modes: Vec<usize>, block: RealMatrix) -> Result<Self> {
        validate_modes(&modes, num_modes)?;
        let k = modes.len();
        if block.shape() != (2 * k, 2 * k) {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{} block for {k} modes", 2 * k, 2 * k),
                actual: format!("{}x{}", block.rows(), block.cols()),
            });
        }
        Ok(Self {
            num_modes,
            modes,
            block,
        })
    }

    /// Wraps a dense `2n × 2n` matrix.
    pub fn from_dense(matrix: RealMatrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.rows().is_multiple_of(2) {
            return Err(Error::InvalidSize(format!(
                "symplectic matrix must be 2n x 2n, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let n = matrix.rows() / 2;
        Self::embed(n, (0..n).collect(), matrix)
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn dim(&self) -> usize {
        2 * self.num_modes
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn local_block(&self) -> &RealMatrix {
        &self.block
    }

    pub fn quadrature_indices(&self) -> Vec<usize> {
        quadrature_indices(&self.modes, self.num_modes)
    }

    pub fn to_dense(&self) -> RealMatrix {
        let mut s = RealMatrix::identity(self.dim());
        let idx = self.quadrature_indices();
        for (a, &ia) in idx.iter().enumerate() {
            for (b, &ib) in idx.iter().enumerate() {
                s[(ia, ib)] = self.block[(a, b)];
            }
        }
        s
    }

    /// `‖SΩSᵀ − Ω‖∞`. The identity part is exactly symplectic and does not
    /// mix with the block, so only the local block is checked.
    pub fn defect(&self) -> f64 {
        let k = self.modes.len();
        if k == 0 {
            return 0.0;
        }
        let om = omega(k);
        let lhs = self
            .block
            .matmul(&om)
            .and_then(|x| x.matmul(&self.block.transpose()))
            .expect("square blocks");
        lhs.max_abs_diff(&om)
    }

    /// Dense product `self · other`.
    pub fn compose(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.num_modes != other.num_modes {
            return Err(Error::DimensionMismatch {
                expected: format!("{} modes", self.num_modes),
                actual: format!("{} modes", other.num_modes),
            });
        }
        Self::from_dense(self.to_dense().matmul(&other.to_dense())?)
    }
}

/// `S_U = [[Re U, −Im U], [Im U, Re U]]` for the passive map `a ↦ U a` on the
/// listed modes, identity elsewhere.
pub fn symplectic_from_unitary(
    u: &ComplexField,
    modes: &[usize],
    num_modes: usize,
) -> Result<SymplecticMatrix> {
    let k = modes.len();
    if u.shape() != (k, k) {
        return Err(Error::DimensionMismatch {
            expected: format!("{k}x{k} unitary for {k} target modes"),
            actual: format!("{}x{}", u.rows(), u.cols()),
        });
    }
    let deviation = u.unitarity_deviation();
    if deviation > UNITARITY {
        return Err(Error::NotUnitary { deviation });
    }
    let block = RealMatrix::from_fn(2 * k, 2 * k, |i, j| {
        let z = u[(i % k, j % k)];
        match (i < k, j < k) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    SymplecticMatrix::embed(num_modes, modes.to_vec(), block)
}

pub(crate) fn validate_modes(modes: &[usize], num_modes: usize) -> Result<()> {
    for (i, &m) in modes.iter().enumerate() {
        if m >= num_modes {
            return Err(Error::InvalidTargets(format!(
                "mode {m} out of range for {num_modes} modes"
            )));
        }
        if modes[..i].contains(&m) {
            return Err(Error::InvalidTargets(format!("mode {m} listed twice")));
        }
    }
    Ok(())
}
