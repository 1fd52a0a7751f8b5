//! End-to-end spectral experiments: low-pass denoising and heat-equation
//! integration, each run through the Gaussian circuit and a classical FFT
//! reference.

mod filter;
mod heat;
mod mask;
mod report;
mod signal;

pub use filter::{classical_filter_oracle, run_filter_pipeline, FilterExperiment, FilterReport};
pub use heat::{
    classical_heat_oracle, heat_propagator, heat_transmissivities, initial_condition,
    run_heat_pipeline, GaussianPeak, HeatParams, HeatReport,
};
pub use mask::{mask_transmissivities, MaskSpec, TransmissivityProfile};
pub use report::{ExperimentReport, StageCheck};
pub use signal::{make_noisy_signal, make_test_signal, snr_db, CosineComponent, SignalSpec};

use crate::encoder::EncodedState;
use crate::error::Result;
use crate::gates::apply_loss;
use crate::numerics::{fft2_real, ifft2_oracle, ComplexField, RealMatrix};
use crate::qft::{apply_inverse_qft2d, apply_qft2d};

/// QFT, per-mode loss on both registers, inverse QFT. With `checks`, records
/// the physicality margin after each of the three stages.
pub fn apply_spectral_losses(
    enc: &mut EncodedState,
    profile: &TransmissivityProfile,
    mut checks: Option<&mut Vec<StageCheck>>,
    label: &str,
) -> Result<()> {
    let mut record = |enc: &EncodedState, stage: &str| {
        if let Some(list) = checks.as_deref_mut() {
            list.push(StageCheck {
                stage: format!("{label}{stage}"),
                min_eigenvalue: enc.state.check_physicality().min_eigenvalue,
            });
        }
    };
    apply_qft2d(enc)?;
    record(enc, "qft");
    let m = enc.layout.m;
    for (i, &t) in profile.rows.iter().enumerate() {
        apply_loss(&mut enc.state, i, t)?;
    }
    for (j, &t) in profile.cols.iter().enumerate() {
        apply_loss(&mut enc.state, m + j, t)?;
    }
    record(enc, "loss");
    apply_inverse_qft2d(enc)?;
    record(enc, "inverse_qft");
    Ok(())
}

/// `Re ifft2(fft2(field) ⊙ factor)` and the largest discarded imaginary part.
pub fn classical_spectral_multiply(field: &RealMatrix, factor: &RealMatrix) -> (RealMatrix, f64) {
    let spectrum = fft2_real(field);
    let filtered = ComplexField::from_fn(field.rows(), field.cols(), |i, j| {
        spectrum[(i, j)] * factor[(i, j)]
    });
    let back = ifft2_oracle(&filtered);
    (back.re(), back.im().max_abs())
}
