use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::RealMatrix;

/// `amplitude · cos(2π f_r r/N) · cos(2π f_c c/N)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CosineComponent {
    pub freq_r: u32,
    pub freq_c: u32,
    pub amplitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SignalSpec {
    pub size: usize,
    pub components: Vec<CosineComponent>,
    pub noise_std: f64,
    pub seed: u64,
}

impl Default for SignalSpec {
    fn default() -> Self {
        let c = |freq_r, freq_c, amplitude| CosineComponent {
            freq_r,
            freq_c,
            amplitude,
        };
        Self {
            size: 64,
            components: vec![c(3, 3, 1.0), c(7, 0, 0.5), c(0, 5, 0.5)],
            noise_std: 1.0,
            seed: 0,
        }
    }
}

impl SignalSpec {
    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::InvalidSize("signal size must be positive".into()));
        }
        for c in &self.components {
            if 2 * c.freq_r.max(c.freq_c) as usize >= self.size.max(1) && self.size > 1 {
                return Err(Error::InvalidParameter(format!(
                    "frequency ({}, {}) outside [0, {})",
                    c.freq_r,
                    c.freq_c,
                    self.size / 2
                )));
            }
            if !c.amplitude.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "amplitude {}",
                    c.amplitude
                )));
            }
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "noise_std {}",
                self.noise_std
            )));
        }
        Ok(())
    }
}

/// Noise-free sum of the cosine components on an `N × N` grid.
pub fn make_test_signal(spec: &SignalSpec) -> Result<RealMatrix> {
    spec.validate()?;
    let n = spec.size as f64;
    Ok(RealMatrix::from_fn(spec.size, spec.size, |r, c| {
        spec.components
            .iter()
            .map(|k| {
                k.amplitude
                    * (2.0 * PI * k.freq_r as f64 * r as f64 / n).cos()
                    * (2.0 * PI * k.freq_c as f64 * c as f64 / n).cos()
            })
            .sum()
    }))
}

/// `(clean, clean + noise)` with i.i.d. normal noise drawn from `spec.seed`.
pub fn make_noisy_signal(spec: &SignalSpec) -> Result<(RealMatrix, RealMatrix)> {
    let clean = make_test_signal(spec)?;
    let normal = Normal::new(0.0, spec.noise_std)
        .map_err(|e| Error::InvalidParameter(format!("noise: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut noisy = clean.clone();
    for x in noisy.as_mut_slice() {
        *x += normal.sample(&mut rng);
    }
    Ok((clean, noisy))
}

/// `10 log₁₀(Σ ref² / Σ (corrupted − ref)²)`; `+∞` when the two agree exactly.
pub fn snr_db(reference: &RealMatrix, corrupted: &RealMatrix) -> Result<f64> {
    if reference.shape() != corrupted.shape() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", reference.rows(), reference.cols()),
            actual: format!("{}x{}", corrupted.rows(), corrupted.cols()),
        });
    }
    let signal: f64 = reference.as_slice().iter().map(|x| x * x).sum();
    if signal == 0.0 {
        return Err(Error::InvalidParameter(
            "reference has zero power; SNR undefined".into(),
        ));
    }
    let noise: f64 = reference
        .as_slice()
        .iter()
        .zip(corrupted.as_slice())
        .map(|(a, b)| (b - a) * (b - a))
        .sum();
    if noise == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (signal / noise).log10())
}
