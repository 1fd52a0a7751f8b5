use serde::{Deserialize, Serialize};

use super::mask::TransmissivityProfile;
use super::report::{ExperimentReport, StageCheck};
use super::{apply_spectral_losses, classical_spectral_multiply};
use crate::encoder::{encode, read_encoded, EncodingConfig};
use crate::error::{Error, Result};
use crate::numerics::{centered_frequency, is_power_of_two, RealMatrix};
use crate::qft::{qft_gate_report, QftGateReport};

/// `amplitude · exp(−((r − center_r)² + (c − center_c)²) / (2 width²))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPeak {
    pub center_r: f64,
    pub center_c: f64,
    pub width: f64,
    pub amplitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HeatParams {
    pub size: usize,
    pub alpha: f64,
    pub dt: f64,
    pub steps: usize,
    /// `None` places two unit peaks of width `N/8` at `(N/3, N/3)` and
    /// `(2N/3, 2N/3)`.
    pub peaks: Option<Vec<GaussianPeak>>,
    pub encoding: EncodingConfig,
    pub check_physicality: bool,
}

impl Default for HeatParams {
    fn default() -> Self {
        Self {
            size: 32,
            alpha: 0.05,
            dt: 0.2,
            steps: 4,
            peaks: None,
            encoding: EncodingConfig::default(),
            check_physicality: true,
        }
    }
}

impl HeatParams {
    pub fn validate(&self) -> Result<()> {
        if !is_power_of_two(self.size) {
            return Err(Error::InvalidSize(format!(
                "heat grid must be a power of two, got {}",
                self.size
            )));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        Ok(())
    }

    pub fn peaks(&self) -> Vec<GaussianPeak> {
        self.peaks.clone().unwrap_or_else(|| {
            let n = self.size as f64;
            [n / 3.0, 2.0 * n / 3.0]
                .into_iter()
                .map(|c| GaussianPeak {
                    center_r: c,
                    center_c: c,
                    width: n / 8.0,
                    amplitude: 1.0,
                })
                .collect()
        })
    }
}

pub fn initial_condition(params: &HeatParams) -> Result<RealMatrix> {
    params.validate()?;
    let peaks = params.peaks();
    if let Some(p) = peaks.iter().find(|p| p.width.is_nan() || p.width <= 0.0) {
        return Err(Error::InvalidParameter(format!("peak width {}", p.width)));
    }
    Ok(RealMatrix::from_fn(params.size, params.size, |r, c| {
        peaks
            .iter()
            .map(|p| {
                let dr = r as f64 - p.center_r;
                let dc = c as f64 - p.center_c;
                p.amplitude * (-(dr * dr + dc * dc) / (2.0 * p.width * p.width)).exp()
            })
            .sum()
    }))
}

/// `T_i = exp(−2α k_i² Δt)` per register, centered integer wavenumbers.
pub fn heat_transmissivities(params: &HeatParams) -> Result<TransmissivityProfile> {
    params.validate()?;
    let n = params.size;
    let t: Vec<f64> = (0..n)
        .map(|i| {
            let k = centered_frequency(i, n) as f64;
            (-2.0 * params.alpha * k * k * params.dt).exp()
        })
        .collect();
    Ok(TransmissivityProfile {
        rows: t.clone(),
        cols: t,
    })
}

/// One-step propagator `G(k, Δt) = exp(−α(k_r² + k_c²)Δt)` in FFT bin order.
pub fn heat_propagator(params: &HeatParams) -> RealMatrix {
    let n = params.size;
    RealMatrix::from_fn(n, n, |i, j| {
        let kr = centered_frequency(i, n) as f64;
        let kc = centered_frequency(j, n) as f64;
        (-params.alpha * (kr * kr + kc * kc) * params.dt).exp()
    })
}

/// Pseudospectral snapshots `u(0), u(Δt), …, u(steps·Δt)`.
pub fn classical_heat_oracle(u0: &RealMatrix, params: &HeatParams) -> Result<Vec<RealMatrix>> {
    params.validate()?;
    let g = heat_propagator(params);
    let mut snapshots = vec![u0.clone()];
    for _ in 0..params.steps {
        let (next, _) = classical_spectral_multiply(snapshots.last().expect("non-empty"), &g);
        snapshots.push(next);
    }
    Ok(snapshots)
}

#[derive(Clone, Debug)]
pub struct HeatReport {
    pub times: Vec<f64>,
    pub cv_snapshots: Vec<RealMatrix>,
    pub classical_snapshots: Vec<RealMatrix>,
    /// `max |u_CV − u_classical|` per snapshot.
    pub errors: Vec<f64>,
    /// Round-trip error of loading `u(0)` into the state, before any step.
    pub encoding_error: f64,
    pub lambda: f64,
    pub qft_gates: QftGateReport,
    pub physicality: Vec<StageCheck>,
}

impl HeatReport {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_report(&self) -> ExperimentReport {
        let mut fields = Vec::new();
        for (k, (cv, cl)) in self
            .cv_snapshots
            .iter()
            .zip(&self.classical_snapshots)
            .enumerate()
        {
            fields.push((format!("classical_step{k}"), cl.clone()));
            fields.push((format!("cv_step{k}"), cv.clone()));
        }
        ExperimentReport {
            name: "heat".into(),
            columns: vec![
                "time".into(),
                "max_abs_error".into(),
                "total_heat_cv".into(),
            ],
            rows: self
                .times
                .iter()
                .zip(&self.errors)
                .zip(&self.cv_snapshots)
                .map(|((t, e), u)| vec![t.to_string(), e.to_string(), u.sum().to_string()])
                .collect(),
            fields,
            physicality: self.physicality.clone(),
        }
    }
}

pub fn run_heat_pipeline(params: &HeatParams) -> Result<HeatReport> {
    let u0 = initial_condition(params)?;
    let profile = heat_transmissivities(params)?;
    let classical_snapshots = classical_heat_oracle(&u0, params)?;

    let mut enc = encode(&u0, params.encoding)?;
    let encoding_error = read_encoded(&enc)?.max_abs_diff(&u0);
    let mut checks = Vec::new();
    if params.check_physicality {
        checks.push(StageCheck {
            stage: "encoded".into(),
            min_eigenvalue: enc.state.check_physicality().min_eigenvalue,
        });
    }
    let mut cv_snapshots = vec![u0];
    for step in 1..=params.steps {
        let label = format!("step{step}_");
        apply_spectral_losses(
            &mut enc,
            &profile,
            params.check_physicality.then_some(&mut checks),
            &label,
        )?;
        cv_snapshots.push(read_encoded(&enc)?);
    }

    let errors = cv_snapshots
        .iter()
        .zip(&classical_snapshots)
        .map(|(a, b)| a.max_abs_diff(b))
        .collect();
    Ok(HeatReport {
        times: (0..=params.steps).map(|k| k as f64 * params.dt).collect(),
        cv_snapshots,
        classical_snapshots,
        errors,
        encoding_error,
        lambda: enc.lambda,
        qft_gates: qft_gate_report(params.size, params.size)?,
        physicality: checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn transmissivity_examples() {
        let t = heat_transmissivities(&HeatParams::default()).unwrap();
        assert_eq!(t.rows[0], 1.0);
        assert!((t.rows[1] - (-0.02f64).exp()).abs() < 1e-15);
        assert_eq!(t.rows[1], t.rows[31]);
        assert!(t.rows.iter().all(|&x| x > 0.0 && x <= 1.0));
        // √(T_i T_j) is the propagator
        let g = heat_propagator(&HeatParams::default());
        assert!(t.spectral_factor().max_abs_diff(&g) < 1e-15);
    }

    #[test]
    fn zero_steps_returns_initial_condition() {
        let params = HeatParams {
            steps: 0,
            ..HeatParams::default()
        };
        let r = run_heat_pipeline(&params).unwrap();
        assert_eq!(r.errors, vec![0.0]);
        assert_eq!(r.cv_snapshots[0], initial_condition(&params).unwrap());
    }

    #[test]
    fn small_grid_matches_oracle_and_conserves_heat() {
        let params = HeatParams {
            size: 8,
            steps: 3,
            alpha: 0.3,
            ..HeatParams::default()
        };
        let r = run_heat_pipeline(&params).unwrap();
        assert!(r.max_error() <= 1e-12, "{:e}", r.max_error());
        let heat0 = r.cv_snapshots[0].sum();
        for (u, c) in r.cv_snapshots.iter().zip(&r.classical_snapshots) {
            assert!((u.sum() - heat0).abs() <= 1e-10);
            assert!((c.sum() - heat0).abs() <= 1e-10);
        }
        let norms: Vec<f64> = r
            .cv_snapshots
            .iter()
            .map(RealMatrix::frobenius_norm)
            .collect();
        assert!(norms.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(r.physicality.iter().all(StageCheck::is_physical));
    }

    #[test]
    fn oracle_matches_single_cosine_decay() {
        let params = HeatParams {
            size: 16,
            steps: 3,
            ..HeatParams::default()
        };
        let (kr, kc) = (2.0, 3.0);
        let u0 = RealMatrix::from_fn(16, 16, |r, c| {
            (2.0 * PI * kr * r as f64 / 16.0).cos() * (2.0 * PI * kc * c as f64 / 16.0).cos()
        });
        let snaps = classical_heat_oracle(&u0, &params).unwrap();
        for (step, u) in snaps.iter().enumerate() {
            let decay = (-params.alpha * (kr * kr + kc * kc) * params.dt * step as f64).exp();
            assert!(u.max_abs_diff(&u0.scale(decay)) < 1e-12);
        }
    }

    #[test]
    fn default_initial_condition_has_two_peaks() {
        let u0 = initial_condition(&HeatParams::default()).unwrap();
        assert!(u0[(11, 11)] > 0.99 && u0[(21, 21)] > 0.99);
        assert!(u0.max_abs() < 1.1);
    }

    #[test]
    fn invalid_params() {
        for p in [
            HeatParams {
                size: 12,
                ..HeatParams::default()
            },
            HeatParams {
                alpha: 0.0,
                ..HeatParams::default()
            },
            HeatParams {
                dt: -1.0,
                ..HeatParams::default()
            },
        ] {
            assert!(run_heat_pipeline(&p).is_err());
        }
    }
}
