//! Loads a real `m × n` matrix into the `x–x` cross-covariance block of a
//! bipartite Gaussian state.
//!
//! With `D = U Σ Vᵀ`, each singular value sets a two-mode squeezer between
//! mode `k` of `r₁` and mode `k` of `r₂` (`sinh 2r_k = λσ_k`); the
//! interferometers `U` on `r₁` and `V` on `r₂` then rotate `λΣ` into `λD`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{clements_decompose, GateOp};
use crate::gaussian::{GaussianState, RegisterLayout};
use crate::numerics::{svd, ComplexField, RealMatrix, SvdResult};

pub const DEFAULT_MAX_SQUEEZE: f64 = 6.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EncodingConfig {
    /// Global scale `λ > 0`; `None` picks [`default_lambda`].
    pub lambda: Option<f64>,
    /// Largest allowed `|r_k|`.
    pub max_squeeze: f64,
}

impl Default for EncodingConfig {
    fn default() -> Self {
        Self {
            lambda: None,
            max_squeeze: DEFAULT_MAX_SQUEEZE,
        }
    }
}

impl EncodingConfig {
    pub fn with_lambda(lambda: f64) -> Self {
        Self {
            lambda: Some(lambda),
            ..Self::default()
        }
    }

    /// The `λ` actually used for a matrix with largest singular value `sigma_max`.
    pub fn resolve_lambda(&self, sigma_max: f64) -> Result<f64> {
        match self.lambda {
            Some(l) if l > 0.0 && l.is_finite() => Ok(l),
            Some(l) => Err(Error::InvalidParameter(format!(
                "lambda must be positive, got {l}"
            ))),
            None => Ok(default_lambda(sigma_max)),
        }
    }
}

/// `1` while `σ_max ≤ 2`, otherwise `1/σ_max` so that `λσ_max = 1`.
pub fn default_lambda(sigma_max: f64) -> f64 {
    if sigma_max <= 2.0 {
        1.0
    } else {
        1.0 / sigma_max
    }
}

/// `r_k = ½ arcsinh(λσ_k)`.
pub fn squeezing_params(
    singular_values: &[f64],
    lambda: f64,
    max_squeeze: f64,
) -> Result<Vec<f64>> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    singular_values
        .iter()
        .map(|&s| {
            if s.is_nan() || s < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "singular value {s} is negative"
                )));
            }
            let r = 0.5 * (lambda * s).asinh();
            if r.abs() > max_squeeze {
                Err(Error::SqueezeCapExceeded {
                    required: r,
                    cap: max_squeeze,
                    lambda,
                })
            } else {
                Ok(r)
            }
        })
        .collect()
}

/// TMS gates pairing mode `k` of `r₁` with mode `k` of `r₂`.
pub fn squeezing_ops(squeezing: &[f64], layout: RegisterLayout) -> Vec<GateOp> {
    squeezing
        .iter()
        .enumerate()
        .map(|(k, &r)| GateOp::two_mode_squeeze(r, k, layout.m + k))
        .collect()
}

/// `U` on the row register and `V` on the column register.
pub fn interferometer_ops(svd: &SvdResult, layout: RegisterLayout) -> Vec<GateOp> {
    vec![
        GateOp::interferometer(ComplexField::from_real(&svd.u), layout.row_modes()),
        GateOp::interferometer(ComplexField::from_real(&svd.v), layout.col_modes()),
    ]
}

#[derive(Clone, Debug)]
pub struct EncodedState {
    pub state: GaussianState,
    pub layout: RegisterLayout,
    pub config: EncodingConfig,
    pub lambda: f64,
    pub squeezing: Vec<f64>,
    pub svd: SvdResult,
}

impl EncodedState {
    /// Entanglement entropy (nats) between the registers, from the symplectic
    /// spectrum of the `r₁` marginal.
    pub fn register_entropy(&self) -> Result<f64> {
        Ok(self.state.reduced(&self.layout.row_modes())?.entropy())
    }
}

pub fn encode(d: &RealMatrix, config: EncodingConfig) -> Result<EncodedState> {
    let layout = RegisterLayout::new(d.rows(), d.cols())?;
    let svd = svd(d)?;
    let lambda = config.resolve_lambda(svd.max_singular_value())?;
    let squeezing = squeezing_params(&svd.singular_values, lambda, config.max_squeeze)?;
    let mut state = GaussianState::vacuum(layout.total_modes())?;
    for op in squeezing_ops(&squeezing, layout)
        .iter()
        .chain(&interferometer_ops(&svd, layout))
    {
        op.apply(&mut state)?;
    }
    Ok(EncodedState {
        state,
        layout,
        config,
        lambda,
        squeezing,
        svd,
    })
}

/// `σ_{x_{r₁} x_{r₂}} / λ`.
pub fn read_encoded(enc: &EncodedState) -> Result<RealMatrix> {
    let (xx, _) = enc.state.cross_blocks(enc.layout)?;
    Ok(xx.scale(1.0 / enc.lambda))
}

/// `E(r) = cosh²r ln cosh²r − sinh²r ln sinh²r` (nats).
pub fn entanglement_entropy(r: f64) -> f64 {
    let c2 = r.cosh().powi(2);
    let s2 = r.sinh().powi(2);
    let xlnx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
    xlnx(c2) - xlnx(s2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingGateReport {
    pub tms: usize,
    pub bs_ps_pairs: usize,
    /// TMS layer plus the deeper of the two register meshes.
    pub depth: usize,
}

/// Gate counts for encoding an `m × n` matrix with Clements meshes. The mesh
/// layout depends only on the size, so the identity is decomposed.
pub fn encoding_gate_report(m: usize, n: usize) -> Result<EncodingGateReport> {
    RegisterLayout::new(m, n)?;
    let mesh_m = clements_decompose(&ComplexField::identity(m))?;
    let mesh_n = clements_decompose(&ComplexField::identity(n))?;
    Ok(EncodingGateReport {
        tms: m.min(n),
        bs_ps_pairs: mesh_m.pair_count() + mesh_n.pair_count(),
        depth: 1 + mesh_m.depth().max(mesh_n.depth()),
    })
}
