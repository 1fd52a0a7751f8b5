//! Cooley–Tukey butterfly circuits on each register and the spectrum readout.
//!
//! Decimation in time: a bit-reversal relabeling, then `log₂N` stages of
//! butterflies `R(φ_k + π)` on the lower wire followed by `BS(π/4, 0)`. The
//! complex mode map of the whole circuit is the unitary DFT `F_N`, so on an
//! encoded state the cross blocks become `xx = λ Re D̂`, `xp = λ Im D̂` with
//! `D̂ = F_m D F_nᵀ`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::encoder::EncodedState;
use crate::error::{Error, Result};
use crate::gates::{twiddle_phase, GateKind, GateOp};
use crate::gaussian::{GaussianState, RegisterLayout};
use crate::numerics::{bit_reversal_permutation, is_power_of_two, ComplexField, RealMatrix};

/// Ordered gate list over `total_modes` modes, split into stages. A stage
/// counts as one layer of depth.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitProgram {
    total_modes: usize,
    stages: Vec<Vec<GateOp>>,
}

impl CircuitProgram {
    pub fn new(total_modes: usize) -> Self {
        Self {
            total_modes,
            stages: Vec::new(),
        }
    }

    pub fn total_modes(&self) -> usize {
        self.total_modes
    }

    pub fn stages(&self) -> &[Vec<GateOp>] {
        &self.stages
    }

    pub fn ops(&self) -> impl Iterator<Item = &GateOp> {
        self.stages.iter().flatten()
    }

    /// Opens a new stage; following pushes land in it.
    pub fn begin_stage(&mut self) {
        self.stages.push(Vec::new());
    }

    /// Appends to the current stage (opening one if none exists).
    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.total_modes)?;
        if self.stages.is_empty() {
            self.begin_stage();
        }
        self.stages.last_mut().expect("stage exists").push(op);
        Ok(())
    }

    /// Gates excluding mode relabelings.
    pub fn gate_count(&self) -> usize {
        self.ops()
            .filter(|op| !matches!(op.kind, GateKind::ModePermutation { .. }))
            .count()
    }

    pub fn depth(&self) -> usize {
        self.stages.iter().filter(|s| !s.is_empty()).count()
    }

    /// Concatenation: `other` runs after `self`.
    pub fn append(&mut self, other: &CircuitProgram) -> Result<()> {
        self.check_same_modes(other)?;
        self.stages.extend(other.stages.iter().cloned());
        Ok(())
    }

    /// Runs two programs side by side, merging their `k`-th stages. Fails if
    /// merged stages would share a mode.
    pub fn parallel(&self, other: &CircuitProgram) -> Result<CircuitProgram> {
        self.check_same_modes(other)?;
        let len = self.stages.len().max(other.stages.len());
        let mut stages = Vec::with_capacity(len);
        for k in 0..len {
            let a = self.stages.get(k).map(Vec::as_slice).unwrap_or(&[]);
            let b = other.stages.get(k).map(Vec::as_slice).unwrap_or(&[]);
            let used: Vec<usize> = a.iter().flat_map(|op| op.targets.iter().copied()).collect();
            if let Some(t) = b
                .iter()
                .flat_map(|op| op.targets.iter())
                .find(|t| used.contains(t))
            {
                return Err(Error::InvalidTargets(format!(
                    "stage {k}: mode {t} used by both programs"
                )));
            }
            stages.push(a.iter().chain(b).cloned().collect());
        }
        Ok(CircuitProgram {
            total_modes: self.total_modes,
            stages,
        })
    }

    /// Reversed program with every gate replaced by its adjoint.
    pub fn inverse(&self) -> Result<CircuitProgram> {
        let stages = self
            .stages
            .iter()
            .rev()
            .map(|s| {
                s.iter()
                    .rev()
                    .map(GateOp::adjoint)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CircuitProgram {
            total_modes: self.total_modes,
            stages,
        })
    }

    pub fn apply(&self, state: &mut GaussianState) -> Result<()> {
        if state.num_modes() != self.total_modes {
            return Err(Error::DimensionMismatch {
                expected: format!("{}-mode state", self.total_modes),
                actual: format!("{}-mode state", state.num_modes()),
            });
        }
        for op in self.ops() {
            op.apply(state)?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("program {}\n", self.total_modes);
        for stage in &self.stages {
            s.push_str("stage\n");
            for op in stage {
                s.push_str(&op.to_line());
                s.push('\n');
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<CircuitProgram> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty program".into()))?;
        let total: usize = header
            .strip_prefix("program ")
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad program header `{header}`")))?;
        let mut program = CircuitProgram::new(total);
        for line in lines {
            if line == "stage" {
                program.begin_stage();
            } else {
                program.push(GateOp::parse_line(line)?)?;
            }
        }
        Ok(program)
    }

    fn check_same_modes(&self, other: &CircuitProgram) -> Result<()> {
        if self.total_modes == other.total_modes {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: format!("{} modes", self.total_modes),
                actual: format!("{} modes", other.total_modes),
            })
        }
    }
}

/// Appends `R(φ_k + π)` on `j` and `BS(π/4, 0)` on `(i, j)` to the current
/// stage, mapping `(a, b)` to `((a + e^{iφ_k} b)/√2, (a − e^{iφ_k} b)/√2)`.
pub fn butterfly_block(program: &mut CircuitProgram, i: usize, j: usize, phi_k: f64) -> Result<()> {
    if i == j {
        return Err(Error::InvalidTargets(format!(
            "butterfly on a single mode {i}"
        )));
    }
    program.push(GateOp::rotation(phi_k + PI, j))?;
    program.push(GateOp::beam_splitter(FRAC_PI_4, 0.0, i, j))
}

/// Radix-2 DIT QFT on the listed register modes.
pub fn build_ct_qft_1d(modes: &[usize], total_modes: usize) -> Result<CircuitProgram> {
    let n = modes.len();
    if !is_power_of_two(n) {
        return Err(Error::InvalidSize(format!(
            "QFT register size must be a power of two, got {n}"
        )));
    }
    let mut program = CircuitProgram::new(total_modes);
    if n == 1 {
        return Ok(program);
    }
    program.begin_stage();
    program.push(GateOp::permutation(
        bit_reversal_permutation(n)?,
        modes.to_vec(),
    ))?;
    let mut half = 1;
    while half < n {
        let len = 2 * half;
        program.begin_stage();
        for group in (0..n).step_by(len) {
            for t in 0..half {
                butterfly_block(
                    &mut program,
                    modes[group + t],
                    modes[group + t + half],
                    twiddle_phase(t, len),
                )?;
            }
        }
        half = len;
    }
    Ok(program)
}

/// QFT on both registers, run in parallel.
pub fn build_qft2d(layout: RegisterLayout) -> Result<CircuitProgram> {
    let total = layout.total_modes();
    build_ct_qft_1d(&layout.row_modes(), total)?
        .parallel(&build_ct_qft_1d(&layout.col_modes(), total)?)
}

/// Complex mode map of the program on `modes`: `a_out = U a_in`. Only passive
/// gates acting inside `modes` are allowed.
pub fn program_to_unitary(program: &CircuitProgram, modes: &[usize]) -> Result<ComplexField> {
    let n = modes.len();
    let mut u = ComplexField::identity(n);
    for op in program.ops() {
        let local = op
            .targets
            .iter()
            .map(|t| {
                modes.iter().position(|m| m == t).ok_or_else(|| {
                    Error::InvalidTargets(format!(
                        "{} touches mode {t} outside the register",
                        op.name()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let g = op.mode_map()?;
        let mut next = u.clone();
        for (a, &ra) in local.iter().enumerate() {
            for col in 0..n {
                next[(ra, col)] = local
                    .iter()
                    .enumerate()
                    .map(|(b, &rb)| g[(a, b)] * u[(rb, col)])
                    .sum::<Complex64>();
            }
        }
        u = next;
    }
    Ok(u)
}

pub fn apply_qft2d(enc: &mut EncodedState) -> Result<()> {
    build_qft2d(enc.layout)?.apply(&mut enc.state)
}

pub fn apply_inverse_qft2d(enc: &mut EncodedState) -> Result<()> {
    build_qft2d(enc.layout)?.inverse()?.apply(&mut enc.state)
}

#[derive(Clone, Debug)]
pub struct SpectrumReadout {
    pub spectrum: ComplexField,
    pub lambda: f64,
}

/// `D̂ = (σ_{x_{r₁}x_{r₂}} + i σ_{x_{r₁}p_{r₂}}) / λ`.
pub fn read_spectrum(enc: &EncodedState) -> Result<SpectrumReadout> {
    let (xx, xp) = enc.state.cross_blocks(enc.layout)?;
    Ok(SpectrumReadout {
        spectrum: ComplexField::from_parts(&xx, &xp)?.scale(1.0 / enc.lambda),
        lambda: enc.lambda,
    })
}

/// Largest violation of `σ_{p p} = −σ_{x x}` and `σ_{p x} = σ_{x p}` across
/// the registers, divided by `λ`. Zero for an encoded state with any passive
/// register circuits applied.
pub fn redundant_block_deviation(enc: &EncodedState) -> Result<f64> {
    let (xx, xp) = enc.state.cross_blocks(enc.layout)?;
    let (px, pp) = enc.state.redundant_cross_blocks(enc.layout)?;
    let d1 = pp.max_abs_diff(&xx.scale(-1.0));
    let d2 = px.max_abs_diff(&xp);
    Ok(d1.max(d2) / enc.lambda)
}

/// Re/Im parts of the readout as separate real matrices.
pub fn split_spectrum(spectrum: &ComplexField) -> (RealMatrix, RealMatrix) {
    (spectrum.re(), spectrum.im())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QftGateReport {
    pub row_gates: usize,
    pub col_gates: usize,
    pub gate_count: usize,
    pub depth: usize,
}

pub fn qft_gate_report(m: usize, n: usize) -> Result<QftGateReport> {
    let layout = RegisterLayout::new(m, n)?;
    let total = layout.total_modes();
    let rows = build_ct_qft_1d(&layout.row_modes(), total)?;
    let cols = build_ct_qft_1d(&layout.col_modes(), total)?;
    Ok(QftGateReport {
        row_gates: rows.gate_count(),
        col_gates: cols.gate_count(),
        gate_count: rows.gate_count() + cols.gate_count(),
        depth: rows.parallel(&cols)?.depth(),
    })
}
