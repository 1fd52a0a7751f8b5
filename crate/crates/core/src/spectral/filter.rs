use serde::{Deserialize, Serialize};

use super::mask::{mask_transmissivities, MaskSpec};
use super::report::{ExperimentReport, StageCheck};
use super::signal::{make_noisy_signal, snr_db, SignalSpec};
use super::{apply_spectral_losses, classical_spectral_multiply};
use crate::encoder::{
    encode, encoding_gate_report, read_encoded, EncodingConfig, EncodingGateReport,
};
use crate::error::Result;
use crate::numerics::RealMatrix;
use crate::qft::{qft_gate_report, QftGateReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterExperiment {
    pub signal: SignalSpec,
    /// Separable mask realized by the circuit.
    pub mask: MaskSpec,
    /// Mask for the classical baseline column (any shape).
    pub baseline_mask: MaskSpec,
    pub encoding: EncodingConfig,
    pub check_physicality: bool,
}

impl Default for FilterExperiment {
    fn default() -> Self {
        Self {
            signal: SignalSpec::default(),
            mask: MaskSpec::rectangular(10.0),
            baseline_mask: MaskSpec::Circular { radius: 10.0 },
            encoding: EncodingConfig::default(),
            check_physicality: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FilterReport {
    pub clean: RealMatrix,
    pub noisy: RealMatrix,
    pub cv_output: RealMatrix,
    /// Classical filter with the circuit's own mask.
    pub same_mask_reference: RealMatrix,
    pub baseline_output: RealMatrix,
    pub mask: MaskSpec,
    pub baseline_mask: MaskSpec,
    pub snr_in_db: f64,
    pub snr_out_cv_db: f64,
    pub snr_out_baseline_db: f64,
    pub bins_retained_cv: usize,
    pub bins_retained_baseline: usize,
    pub total_bins: usize,
    pub max_error_vs_reference: f64,
    pub lambda: f64,
    pub qft_gates: QftGateReport,
    pub encoding_gates: EncodingGateReport,
    pub physicality: Vec<StageCheck>,
}

impl FilterReport {
    pub fn snr_improvement_cv_db(&self) -> f64 {
        self.snr_out_cv_db - self.snr_in_db
    }

    pub fn snr_improvement_baseline_db(&self) -> f64 {
        self.snr_out_baseline_db - self.snr_in_db
    }

    pub fn to_report(&self) -> ExperimentReport {
        let pct = |k: usize| {
            format!(
                "{k} / {} ({:.1}%)",
                self.total_bins,
                100.0 * k as f64 / self.total_bins as f64
            )
        };
        let row = |name: &str, classical: String, cv: String| vec![name.to_string(), classical, cv];
        let dash = || "-".to_string();
        ExperimentReport {
            name: "filter".into(),
            columns: vec!["metric".into(), "classical".into(), "cv_qfl".into()],
            rows: vec![
                row(
                    "Mask shape",
                    self.baseline_mask.label().into(),
                    self.mask.label().into(),
                ),
                row(
                    "Bins retained",
                    pct(self.bins_retained_baseline),
                    pct(self.bins_retained_cv),
                ),
                row(
                    "SNR in (dB)",
                    self.snr_in_db.to_string(),
                    self.snr_in_db.to_string(),
                ),
                row(
                    "SNR out (dB)",
                    self.snr_out_baseline_db.to_string(),
                    self.snr_out_cv_db.to_string(),
                ),
                row(
                    "SNR improvement (dB)",
                    self.snr_improvement_baseline_db().to_string(),
                    self.snr_improvement_cv_db().to_string(),
                ),
                row(
                    "Error vs same-mask ref.",
                    dash(),
                    self.max_error_vs_reference.to_string(),
                ),
                row("Lambda", dash(), self.lambda.to_string()),
                row("QFT gates", dash(), self.qft_gates.gate_count.to_string()),
                row("QFT depth", dash(), self.qft_gates.depth.to_string()),
                row(
                    "Encoding TMS gates",
                    dash(),
                    self.encoding_gates.tms.to_string(),
                ),
                row(
                    "Encoding BS/PS pairs",
                    dash(),
                    self.encoding_gates.bs_ps_pairs.to_string(),
                ),
            ],
            fields: vec![
                ("clean".into(), self.clean.clone()),
                ("noisy".into(), self.noisy.clone()),
                ("classical".into(), self.baseline_output.clone()),
                (
                    "same_mask_reference".into(),
                    self.same_mask_reference.clone(),
                ),
                ("cv".into(), self.cv_output.clone()),
            ],
            physicality: self.physicality.clone(),
        }
    }
}

/// `Re ifft2(fft2(noisy) ⊙ mask)` for any mask shape.
pub fn classical_filter_oracle(noisy: &RealMatrix, mask: &MaskSpec) -> Result<RealMatrix> {
    let indicator = mask.indicator(noisy.rows())?;
    Ok(classical_spectral_multiply(noisy, &indicator).0)
}

pub fn run_filter_pipeline(exp: &FilterExperiment) -> Result<FilterReport> {
    let n = exp.signal.size;
    let profile = mask_transmissivities(&exp.mask, n)?;
    let (clean, noisy) = make_noisy_signal(&exp.signal)?;

    let mut enc = encode(&noisy, exp.encoding)?;
    let mut checks = Vec::new();
    if exp.check_physicality {
        checks.push(StageCheck {
            stage: "encoded".into(),
            min_eigenvalue: enc.state.check_physicality().min_eigenvalue,
        });
    }
    apply_spectral_losses(
        &mut enc,
        &profile,
        exp.check_physicality.then_some(&mut checks),
        "",
    )?;
    let cv_output = read_encoded(&enc)?;

    let same_mask_reference = classical_filter_oracle(&noisy, &exp.mask)?;
    let baseline_output = classical_filter_oracle(&noisy, &exp.baseline_mask)?;

    Ok(FilterReport {
        snr_in_db: snr_db(&clean, &noisy)?,
        snr_out_cv_db: snr_db(&clean, &cv_output)?,
        snr_out_baseline_db: snr_db(&clean, &baseline_output)?,
        bins_retained_cv: exp.mask.retained_bins(n)?,
        bins_retained_baseline: exp.baseline_mask.retained_bins(n)?,
        total_bins: n * n,
        max_error_vs_reference: cv_output.max_abs_diff(&same_mask_reference),
        lambda: enc.lambda,
        qft_gates: qft_gate_report(n, n)?,
        encoding_gates: encoding_gate_report(n, n)?,
        physicality: checks,
        mask: exp.mask,
        baseline_mask: exp.baseline_mask,
        clean,
        noisy,
        cv_output,
        same_mask_reference,
        baseline_output,
    })
}
