//! Rectangular (Clements) decomposition of an `ℓ`-mode unitary into
//! `ℓ(ℓ−1)/2` nearest-neighbour beam-splitter/phase-shifter pairs.
//!
//! Each pair acts on modes `(k, k+1)` as
//! `T(θ, φ) = [[e^{iφ} cos θ, −sin θ], [e^{iφ} sin θ, cos θ]]`,
//! i.e. `R_k(φ)` followed by `BS(θ, 0)`. Entries below the anti-diagonal are
//! nulled alternately from the right (columns) and from the left (rows); the
//! left factors are then pushed through the residual diagonal so that the
//! whole mesh reads `U = D · T_last ⋯ T_first`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use super::ops::GateOp;
use crate::error::{Error, Result};
use crate::numerics::tol::UNITARITY;
use crate::numerics::ComplexField;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshElement {
    pub layer: usize,
    /// Lower mode of the nearest-neighbour pair `(mode, mode + 1)`.
    pub mode: usize,
    pub theta: f64,
    pub phi: f64,
}

/// Elements are stored in application order; output phases act last.
#[derive(Clone, Debug, PartialEq)]
pub struct ClementsMesh {
    size: usize,
    elements: Vec<MeshElement>,
    output_phases: Vec<f64>,
}

impl ClementsMesh {
    /// Builds a mesh from explicit elements, assigning layers greedily.
    pub fn new(
        size: usize,
        elements: Vec<(usize, f64, f64)>,
        output_phases: Vec<f64>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidSize("mesh needs at least one mode".into()));
        }
        if output_phases.len() != size {
            return Err(Error::DimensionMismatch {
                expected: format!("{size} output phases"),
                actual: output_phases.len().to_string(),
            });
        }
        let mut front = vec![0usize; size];
        let mut out = Vec::with_capacity(elements.len());
        for (mode, theta, phi) in elements {
            if mode + 1 >= size {
                return Err(Error::InvalidTargets(format!(
                    "pair {mode}:{} outside a {size}-mode mesh",
                    mode + 1
                )));
            }
            let layer = front[mode].max(front[mode + 1]);
            front[mode] = layer + 1;
            front[mode + 1] = layer + 1;
            out.push(MeshElement {
                layer,
                mode,
                theta,
                phi,
            });
        }
        Ok(Self {
            size,
            elements: out,
            output_phases,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> &[MeshElement] {
        &self.elements
    }

    pub fn output_phases(&self) -> &[f64] {
        &self.output_phases
    }

    pub fn pair_count(&self) -> usize {
        self.elements.len()
    }

    /// Number of element layers (output phases not counted).
    pub fn depth(&self) -> usize {
        self.elements.iter().map(|e| e.layer + 1).max().unwrap_or(0)
    }

    /// Gate sequence on the given physical modes: for each pair a rotation on
    /// the lower mode then a beam splitter, followed by the output rotations.
    pub fn to_gate_ops(&self, modes: &[usize]) -> Result<Vec<GateOp>> {
        if modes.len() != self.size {
            return Err(Error::DimensionMismatch {
                expected: format!("{} target modes", self.size),
                actual: modes.len().to_string(),
            });
        }
        let mut ops = Vec::with_capacity(2 * self.elements.len() + self.size);
        for e in &self.elements {
            ops.push(GateOp::rotation(e.phi, modes[e.mode]));
            ops.push(GateOp::beam_splitter(
                e.theta,
                0.0,
                modes[e.mode],
                modes[e.mode + 1],
            ));
        }
        for (k, &a) in self.output_phases.iter().enumerate() {
            ops.push(GateOp::rotation(a, modes[k]));
        }
        Ok(ops)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("clements {}\n", self.size);
        for e in &self.elements {
            let _ = writeln!(
                s,
                "{} {}:{} {} {}",
                e.layer,
                e.mode,
                e.mode + 1,
                e.theta,
                e.phi
            );
        }
        s.push_str("outphases");
        for a in &self.output_phases {
            let _ = write!(s, " {a}");
        }
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty mesh text".into()))?;
        let size: usize = header
            .strip_prefix("clements ")
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad mesh header `{header}`")))?;
        let mut elements = Vec::new();
        let mut layers = Vec::new();
        let mut phases = None;
        for line in lines {
            let bad = || Error::Parse(format!("bad mesh line `{line}`"));
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0] == "outphases" {
                phases = Some(
                    fields[1..]
                        .iter()
                        .map(|x| x.parse::<f64>().map_err(|_| bad()))
                        .collect::<Result<Vec<_>>>()?,
                );
                continue;
            }
            if fields.len() != 4 {
                return Err(bad());
            }
            let layer: usize = fields[0].parse().map_err(|_| bad())?;
            let (lo, hi) = fields[1].split_once(':').ok_or_else(bad)?;
            let lo: usize = lo.parse().map_err(|_| bad())?;
            let hi: usize = hi.parse().map_err(|_| bad())?;
            if hi != lo + 1 {
                return Err(Error::Parse(format!(
                    "`{line}`: pair must be adjacent modes"
                )));
            }
            let theta: f64 = fields[2].parse().map_err(|_| bad())?;
            let phi: f64 = fields[3].parse().map_err(|_| bad())?;
            elements.push((lo, theta, phi));
            layers.push(layer);
        }
        let phases = phases.ok_or_else(|| Error::Parse("missing outphases line".into()))?;
        let mesh = Self::new(size, elements, phases)?;
        if mesh
            .elements
            .iter()
            .zip(&layers)
            .any(|(e, &l)| e.layer != l)
        {
            return Err(Error::Parse(
                "layer column does not match the pair ordering".into(),
            ));
        }
        Ok(mesh)
    }
}

/// Factorizes a unitary into a rectangular mesh.
pub fn clements_decompose(u: &ComplexField) -> Result<ClementsMesh> {
    if !u.is_square() || u.rows() == 0 {
        return Err(Error::InvalidSize(format!(
            "expected a non-empty square unitary, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let deviation = u.unitarity_deviation();
    if deviation > UNITARITY {
        return Err(Error::NotUnitary { deviation });
    }
    let n = u.rows();
    let mut w = u.clone();
    let mut right: Vec<(usize, f64, f64)> = Vec::new();
    let mut left: Vec<(usize, f64, f64)> = Vec::new();

    for i in 0..n.saturating_sub(1) {
        if i % 2 == 0 {
            for j in 0..=i {
                let (r, c) = (n - 1 - j, i - j);
                let (a, b) = (w[(r, c)], w[(r, c + 1)]);
                let theta = a.norm().atan2(b.norm());
                let phi = a.arg() - b.arg();
                let tinv = element(theta, phi).adjoint();
                mix_columns(&mut w, c, &tinv);
                right.push((c, theta, phi));
            }
        } else {
            for j in 1..=i + 1 {
                let (r, c) = (n + j - i - 3, j - 1);
                let (a, b) = (w[(r, c)], w[(r + 1, c)]);
                let theta = b.norm().atan2(a.norm());
                let phi = PI + b.arg() - a.arg();
                mix_rows(&mut w, r, &element(theta, phi));
                left.push((r, theta, phi));
            }
        }
    }

    let mut diag: Vec<Complex64> = (0..n).map(|k| w[(k, k)]).collect();
    let mut elements = right;
    // L⁻¹ D = D′ T(θ, φ′) with e^{iφ′} = −d_k/d_{k+1}, d′_k = −e^{−iφ} d_{k+1}.
    for &(k, theta, phi) in left.iter().rev() {
        let (dk, dl) = (diag[k], diag[k + 1]);
        let phi_new = (-dk / dl).arg();
        diag[k] = -Complex64::from_polar(1.0, -phi) * dl;
        elements.push((k, theta, phi_new));
    }
    ClementsMesh::new(n, elements, diag.iter().map(|d| d.arg()).collect())
}

/// Multiplies out the mesh: `diag(e^{iα}) · T_last ⋯ T_first`.
pub fn clements_reconstruct(mesh: &ClementsMesh) -> ComplexField {
    let mut u = ComplexField::identity(mesh.size());
    for e in mesh.elements() {
        mix_rows(&mut u, e.mode, &element(e.theta, e.phi));
    }
    for (k, &a) in mesh.output_phases().iter().enumerate() {
        let z = Complex64::from_polar(1.0, a);
        for j in 0..mesh.size() {
            u[(k, j)] *= z;
        }
    }
    u
}

fn element(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    [
        [e * c, Complex64::new(-s, 0.0)],
        [e * s, Complex64::new(c, 0.0)],
    ]
}

trait Adjoint2 {
    fn adjoint(&self) -> Self;
}

impl Adjoint2 for [[Complex64; 2]; 2] {
    fn adjoint(&self) -> Self {
        [
            [self[0][0].conj(), self[1][0].conj()],
            [self[0][1].conj(), self[1][1].conj()],
        ]
    }
}

/// `W ← T · W` restricted to rows `(r, r+1)`.
fn mix_rows(w: &mut ComplexField, r: usize, t: &[[Complex64; 2]; 2]) {
    for j in 0..w.cols() {
        let (a, b) = (w[(r, j)], w[(r + 1, j)]);
        w[(r, j)] = t[0][0] * a + t[0][1] * b;
        w[(r + 1, j)] = t[1][0] * a + t[1][1] * b;
    }
}

/// `W ← W · T` restricted to columns `(c, c+1)`.
fn mix_columns(w: &mut ComplexField, c: usize, t: &[[Complex64; 2]; 2]) {
    for i in 0..w.rows() {
        let (a, b) = (w[(i, c)], w[(i, c + 1)]);
        w[(i, c)] = a * t[0][0] + b * t[1][0];
        w[(i, c + 1)] = a * t[0][1] + b * t[1][1];
    }
}
