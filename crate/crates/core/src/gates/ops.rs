use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{symplectic_from_unitary, GaussianState, SymplecticMatrix};
use crate::numerics::{ComplexField, RealMatrix};

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    /// Two-mode squeezing `Ŝ₂(r, φ)`; only `φ = 0` is supported.
    TwoModeSqueeze { r: f64, phi: f64 },
    /// Phase rotation `a ↦ e^{iφ} a`.
    Rotation { phi: f64 },
    /// `(a, b) ↦ [[cos θ, −e^{−iφ} sin θ], [e^{iφ} sin θ, cos θ]] (a, b)`.
    /// At `(π/4, 0)` this is `a′ = (a − b)/√2`, `b′ = (a + b)/√2`.
    BeamSplitter { theta: f64, phi: f64 },
    /// Pure-loss channel of transmissivity `T ∈ [0, 1]`.
    Loss { transmissivity: f64 },
    /// Arbitrary passive interferometer `a ↦ U a` on the targets.
    Interferometer { unitary: ComplexField },
    /// Relabeling: output position `k` takes the mode at position
    /// `permutation[k]`.
    ModePermutation { permutation: Vec<usize> },
}

/// A gate and the ordered modes it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub targets: Vec<usize>,
}

impl GateOp {
    pub fn two_mode_squeeze(r: f64, i: usize, j: usize) -> Self {
        Self {
            kind: GateKind::TwoModeSqueeze { r, phi: 0.0 },
            targets: vec![i, j],
        }
    }

    pub fn rotation(phi: f64, mode: usize) -> Self {
        Self {
            kind: GateKind::Rotation { phi },
            targets: vec![mode],
        }
    }

    pub fn beam_splitter(theta: f64, phi: f64, i: usize, j: usize) -> Self {
        Self {
            kind: GateKind::BeamSplitter { theta, phi },
            targets: vec![i, j],
        }
    }

    pub fn loss(transmissivity: f64, mode: usize) -> Self {
        Self {
            kind: GateKind::Loss { transmissivity },
            targets: vec![mode],
        }
    }

    pub fn interferometer(unitary: ComplexField, modes: Vec<usize>) -> Self {
        Self {
            kind: GateKind::Interferometer { unitary },
            targets: modes,
        }
    }

    pub fn permutation(permutation: Vec<usize>, modes: Vec<usize>) -> Self {
        Self {
            kind: GateKind::ModePermutation { permutation },
            targets: modes,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            GateKind::TwoModeSqueeze { .. } => "tms",
            GateKind::Rotation { .. } => "r",
            GateKind::BeamSplitter { .. } => "bs",
            GateKind::Loss { .. } => "loss",
            GateKind::Interferometer { .. } => "interferometer",
            GateKind::ModePermutation { .. } => "perm",
        }
    }

    pub fn is_passive(&self) -> bool {
        !matches!(
            self.kind,
            GateKind::TwoModeSqueeze { .. } | GateKind::Loss { .. }
        )
    }

    /// Checks parameters and that targets are distinct and below `total_modes`.
    pub fn validate(&self, total_modes: usize) -> Result<()> {
        let arity = match &self.kind {
            GateKind::TwoModeSqueeze { .. } | GateKind::BeamSplitter { .. } => Some(2),
            GateKind::Rotation { .. } | GateKind::Loss { .. } => Some(1),
            GateKind::Interferometer { unitary } => Some(unitary.rows()),
            GateKind::ModePermutation { permutation } => Some(permutation.len()),
        };
        if let Some(a) = arity {
            if self.targets.len() != a {
                return Err(Error::InvalidTargets(format!(
                    "{} expects {a} targets, got {}",
                    self.name(),
                    self.targets.len()
                )));
            }
        }
        for (k, &t) in self.targets.iter().enumerate() {
            if t >= total_modes {
                return Err(Error::InvalidTargets(format!(
                    "{}: mode {t} out of range for {total_modes} modes",
                    self.name()
                )));
            }
            if self.targets[..k].contains(&t) {
                return Err(Error::InvalidTargets(format!(
                    "{}: mode {t} repeated",
                    self.name()
                )));
            }
        }
        match &self.kind {
            GateKind::TwoModeSqueeze { r, phi } => {
                if !r.is_finite() {
                    return Err(Error::InvalidParameter(format!("squeezing r = {r}")));
                }
                if *phi != 0.0 {
                    return Err(Error::NotImplemented(format!(
                        "two-mode squeezing with phase {phi} (only phi = 0 is supported)"
                    )));
                }
            }
            GateKind::Rotation { phi } => finite("rotation phase", *phi)?,
            GateKind::BeamSplitter { theta, phi } => {
                finite("beam splitter theta", *theta)?;
                finite("beam splitter phi", *phi)?;
            }
            GateKind::Loss { transmissivity } => check_transmissivity(*transmissivity)?,
            GateKind::Interferometer { unitary } => {
                if !unitary.is_square() {
                    return Err(Error::InvalidSize(
                        "interferometer matrix is not square".into(),
                    ));
                }
            }
            GateKind::ModePermutation { permutation } => {
                let n = permutation.len();
                let mut seen = vec![false; n];
                for &p in permutation {
                    if p >= n || std::mem::replace(&mut seen[p], true) {
                        return Err(Error::InvalidParameter(format!(
                            "{permutation:?} is not a permutation of 0..{n}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Complex mode map of a passive gate on its own targets (`k × k`).
    pub fn mode_map(&self) -> Result<ComplexField> {
        match &self.kind {
            GateKind::Rotation { phi } => Ok(ComplexField::from_fn(1, 1, |_, _| {
                Complex64::from_polar(1.0, *phi)
            })),
            GateKind::BeamSplitter { theta, phi } => Ok(beam_splitter_matrix(*theta, *phi)),
            GateKind::Interferometer { unitary } => Ok(unitary.clone()),
            GateKind::ModePermutation { permutation } => {
                let n = permutation.len();
                Ok(ComplexField::from_fn(n, n, |k, j| {
                    if permutation[k] == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }))
            }
            GateKind::TwoModeSqueeze { .. } => Err(Error::NonPassiveGate("tms")),
            GateKind::Loss { .. } => Err(Error::NonPassiveGate("loss")),
        }
    }

    /// Phase-space action of a unitary gate embedded in `total_modes` modes.
    pub fn symplectic(&self, total_modes: usize) -> Result<SymplecticMatrix> {
        self.validate(total_modes)?;
        match &self.kind {
            GateKind::TwoModeSqueeze { r, .. } => {
                tms_symplectic(*r, (self.targets[0], self.targets[1]), total_modes)
            }
            GateKind::Loss { .. } => Err(Error::NonPassiveGate("loss")),
            _ => symplectic_from_unitary(&self.mode_map()?, &self.targets, total_modes),
        }
    }

    /// Applies the gate to `state` in place.
    pub fn apply(&self, state: &mut GaussianState) -> Result<()> {
        match &self.kind {
            GateKind::Loss { transmissivity } => {
                self.validate(state.num_modes())?;
                apply_loss(state, self.targets[0], *transmissivity)
            }
            _ => state.apply_symplectic(&self.symplectic(state.num_modes())?),
        }
    }

    /// Inverse gate. Loss channels have none.
    pub fn adjoint(&self) -> Result<GateOp> {
        let kind = match &self.kind {
            GateKind::TwoModeSqueeze { r, phi } => GateKind::TwoModeSqueeze { r: -r, phi: *phi },
            GateKind::Rotation { phi } => GateKind::Rotation { phi: -phi },
            // [[c, −e^{−iφ}s], [e^{iφ}s, c]]† = the same form with θ → −θ
            GateKind::BeamSplitter { theta, phi } => GateKind::BeamSplitter {
                theta: -theta,
                phi: *phi,
            },
            GateKind::Interferometer { unitary } => GateKind::Interferometer {
                unitary: unitary.adjoint(),
            },
            GateKind::ModePermutation { permutation } => {
                let mut inv = vec![0; permutation.len()];
                for (k, &p) in permutation.iter().enumerate() {
                    inv[p] = k;
                }
                GateKind::ModePermutation { permutation: inv }
            }
            GateKind::Loss { .. } => {
                return Err(Error::InvalidParameter(
                    "a loss channel is not invertible".into(),
                ))
            }
        };
        Ok(GateOp {
            kind,
            targets: self.targets.clone(),
        })
    }

    /// One-line text form: `gate <kind> <targets> <params>`.
    pub fn to_line(&self) -> String {
        let targets = join(self.targets.iter());
        let params = match &self.kind {
            GateKind::TwoModeSqueeze { r, phi } => format!("{r} {phi}"),
            GateKind::Rotation { phi } => format!("{phi}"),
            GateKind::BeamSplitter { theta, phi } => format!("{theta} {phi}"),
            GateKind::Loss { transmissivity } => format!("{transmissivity}"),
            GateKind::Interferometer { unitary } => {
                let mut s = String::new();
                for (k, z) in unitary.as_slice().iter().enumerate() {
                    if k > 0 {
                        s.push(',');
                    }
                    let _ = write!(s, "{}:{}", z.re, z.im);
                }
                s
            }
            GateKind::ModePermutation { permutation } => join(permutation.iter()),
        };
        format!("gate {} {targets} {params}", self.name())
    }

    pub fn parse_line(line: &str) -> Result<GateOp> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse(format!("malformed gate line `{line}`"));
        if fields.len() < 3 || fields[0] != "gate" {
            return Err(bad());
        }
        let targets = parse_list::<usize>(fields[2])?;
        let params = &fields[3..];
        let num = |k: usize| -> Result<f64> {
            params
                .get(k)
                .ok_or_else(bad)?
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("`{line}`: {e}")))
        };
        let kind = match fields[1] {
            "tms" => GateKind::TwoModeSqueeze {
                r: num(0)?,
                phi: num(1)?,
            },
            "r" => GateKind::Rotation { phi: num(0)? },
            "bs" => GateKind::BeamSplitter {
                theta: num(0)?,
                phi: num(1)?,
            },
            "loss" => GateKind::Loss {
                transmissivity: num(0)?,
            },
            "perm" => GateKind::ModePermutation {
                permutation: parse_list::<usize>(params.first().ok_or_else(bad)?)?,
            },
            "interferometer" => {
                let k = targets.len();
                let entries = params
                    .first()
                    .ok_or_else(bad)?
                    .split(',')
                    .map(|cell| {
                        let (re, im) = cell.split_once(':').ok_or_else(bad)?;
                        Ok(Complex64::new(
                            re.parse().map_err(|_| bad())?,
                            im.parse().map_err(|_| bad())?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                GateKind::Interferometer {
                    unitary: ComplexField::new(k, k, entries)?,
                }
            }
            other => return Err(Error::Parse(format!("unknown gate kind `{other}`"))),
        };
        Ok(GateOp { kind, targets })
    }
}

fn finite(what: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} = {x}")))
    }
}

fn check_transmissivity(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "transmissivity {t} outside [0, 1]"
        )))
    }
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| {
            x.parse::<T>()
                .map_err(|_| Error::Parse(format!("bad list entry `{x}` in `{s}`")))
        })
        .collect()
}

pub fn beam_splitter_matrix(theta: f64, phi: f64) -> ComplexField {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    ComplexField::new(
        2,
        2,
        vec![
            Complex64::new(c, 0.0),
            -e.conj() * s,
            e * s,
            Complex64::new(c, 0.0),
        ],
    )
    .expect("2x2")
}

/// Two-mode squeezer `S_TMS(r)` (`φ = 0`) on modes `(i, j)`: x-block
/// `[[cosh r, sinh r], [sinh r, cosh r]]`, p-block with `−sinh r`.
pub fn tms_symplectic(
    r: f64,
    (i, j): (usize, usize),
    total_modes: usize,
) -> Result<SymplecticMatrix> {
    if i == j {
        return Err(Error::InvalidTargets(format!(
            "two-mode squeezing needs distinct modes, got ({i}, {j})"
        )));
    }
    let (c, s) = (r.cosh(), r.sinh());
    let block = RealMatrix::new(
        4,
        4,
        vec![
            c, s, 0.0, 0.0, //
            s, c, 0.0, 0.0, //
            0.0, 0.0, c, -s, //
            0.0, 0.0, -s, c,
        ],
    )?;
    SymplecticMatrix::embed(total_modes, vec![i, j], block)
}

pub fn rotation_symplectic(phi: f64, mode: usize, total_modes: usize) -> Result<SymplecticMatrix> {
    GateOp::rotation(phi, mode).symplectic(total_modes)
}

pub fn beamsplitter_symplectic(
    theta: f64,
    phi: f64,
    (i, j): (usize, usize),
    total_modes: usize,
) -> Result<SymplecticMatrix> {
    if i == j {
        return Err(Error::InvalidTargets(format!(
            "beam splitter needs distinct modes, got ({i}, {j})"
        )));
    }
    GateOp::beam_splitter(theta, phi, i, j).symplectic(total_modes)
}

/// Pure loss on one mode: `σ → Tσ + (1−T)I` on its quadratures, `μ → √T μ`.
///
/// Correlations between the mode and every other mode scale by `√T`, its own
/// x–p correlation by `T`.
pub fn apply_loss(state: &mut GaussianState, mode: usize, transmissivity: f64) -> Result<()> {
    check_transmissivity(transmissivity)?;
    let n = state.num_modes();
    if mode >= n {
        return Err(Error::InvalidTargets(format!(
            "loss on mode {mode} of a {n}-mode state"
        )));
    }
    if transmissivity == 1.0 {
        return Ok(());
    }
    let scale = transmissivity.sqrt();
    let (qx, qp) = (mode, mode + n);
    for q in [qx, qp] {
        state.mean[q] *= scale;
        for k in 0..2 * n {
            state.cov[(q, k)] *= scale;
        }
        for k in 0..2 * n {
            state.cov[(k, q)] *= scale;
        }
    }
    state.cov[(qx, qx)] += 1.0 - transmissivity;
    state.cov[(qp, qp)] += 1.0 - transmissivity;
    Ok(())
}

/// Twiddle phase `φ_k = −2πk/n` so that `e^{iφ_k} = ω_n^k`.
pub fn twiddle_phase(k: usize, n: usize) -> f64 {
    -2.0 * PI * k as f64 / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::tol::{PHYSICALITY, SYMPLECTIC};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn apply_map(u: &ComplexField, v: &[Complex64]) -> Vec<Complex64> {
        (0..u.rows())
            .map(|i| (0..u.cols()).map(|j| u[(i, j)] * v[j]).sum())
            .collect()
    }

    #[test]
    fn tms_zero_is_identity() {
        let s = tms_symplectic(0.0, (0, 1), 2).unwrap();
        assert_eq!(s.to_dense(), RealMatrix::identity(4));
    }

    #[test]
    fn tms_on_vacuum_correlates_by_sinh_2r() {
        for r in [0.1_f64, 0.5, 1.3] {
            let mut st = GaussianState::vacuum(3).unwrap();
            st.apply_symplectic(&tms_symplectic(r, (0, 2), 3).unwrap())
                .unwrap();
            let cov = st.cov();
            assert!((cov[(0, 2)] - (2.0 * r).sinh()).abs() < 1e-14);
            assert!((cov[(3, 5)] + (2.0 * r).sinh()).abs() < 1e-14);
            for q in [0, 2, 3, 5] {
                assert!((cov[(q, q)] - (2.0 * r).cosh()).abs() < 1e-14);
            }
            assert_eq!(cov[(1, 1)], 1.0);
        }
    }

    #[test]
    fn tms_half_gives_cosh1_sinh1_block() {
        let mut st = GaussianState::vacuum(2).unwrap();
        st.apply_symplectic(&tms_symplectic(0.5, (0, 1), 2).unwrap())
            .unwrap();
        let xx = st.cov().submatrix(0, 0, 2, 2);
        let expected = RealMatrix::from_rows(&[
            vec![1f64.cosh(), 1f64.sinh()],
            vec![1f64.sinh(), 1f64.cosh()],
        ])
        .unwrap();
        assert!(xx.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn tms_rejects_same_mode_and_nonzero_phase() {
        assert!(matches!(
            tms_symplectic(0.2, (1, 1), 2),
            Err(Error::InvalidTargets(_))
        ));
        let op = GateOp {
            kind: GateKind::TwoModeSqueeze { r: 0.2, phi: 0.3 },
            targets: vec![0, 1],
        };
        assert!(matches!(op.symplectic(2), Err(Error::NotImplemented(_))));
    }

    #[test]
    fn rotation_special_cases() {
        assert!(
            rotation_symplectic(0.0, 0, 1)
                .unwrap()
                .to_dense()
                .max_abs_diff(&RealMatrix::identity(2))
                < 1e-16
        );
        let flip = rotation_symplectic(std::f64::consts::PI, 1, 2)
            .unwrap()
            .to_dense();
        let expected = RealMatrix::diagonal(&[1.0, -1.0, 1.0, -1.0]);
        assert!(flip.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn shifted_twiddle_rotation_is_minus_omega() {
        for (k, n) in [(0, 2), (1, 4), (3, 8), (5, 16)] {
            let phi = twiddle_phase(k, n) + std::f64::consts::PI;
            let z = GateOp::rotation(phi, 0).mode_map().unwrap()[(0, 0)];
            let omega =
                Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / n as f64);
            assert!((z + omega).norm() < 1e-15);
        }
    }

    #[test]
    fn balanced_beam_splitter_action() {
        assert_eq!(
            beamsplitter_symplectic(0.0, 0.3, (0, 1), 2)
                .unwrap()
                .to_dense(),
            RealMatrix::identity(4)
        );
        let u = beam_splitter_matrix(FRAC_PI_4, 0.0);
        let (a, b) = (c(0.3, -1.2), c(2.0, 0.5));
        let out = apply_map(&u, &[a, b]);
        assert!((out[0] - (a - b) * FRAC_1_SQRT_2).norm() < 1e-15);
        assert!((out[1] - (a + b) * FRAC_1_SQRT_2).norm() < 1e-15);

        // applied twice: a ↦ −b, b ↦ a
        let twice = beamsplitter_symplectic(FRAC_PI_4, 0.0, (0, 1), 2)
            .unwrap()
            .compose(&beamsplitter_symplectic(FRAC_PI_4, 0.0, (0, 1), 2).unwrap())
            .unwrap();
        let expected = symplectic_from_unitary(
            &ComplexField::new(
                2,
                2,
                vec![c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            )
            .unwrap(),
            &[0, 1],
            2,
        )
        .unwrap();
        assert!(twice.to_dense().max_abs_diff(&expected.to_dense()) < 1e-15);
    }

    #[test]
    fn every_constructor_is_symplectic() {
        let ops = [
            GateOp::two_mode_squeeze(0.7, 0, 3),
            GateOp::rotation(1.1, 2),
            GateOp::beam_splitter(0.4, -2.0, 3, 1),
            GateOp::beam_splitter(FRAC_PI_4, 0.0, 0, 1),
            GateOp::permutation(vec![2, 0, 1], vec![1, 2, 3]),
        ];
        for op in &ops {
            assert!(op.symplectic(4).unwrap().defect() < SYMPLECTIC, "{op:?}");
        }
    }

    #[test]
    fn adjoints_invert() {
        let ops = [
            GateOp::two_mode_squeeze(0.7, 0, 3),
            GateOp::rotation(1.1, 2),
            GateOp::beam_splitter(0.4, -2.0, 3, 1),
            GateOp::permutation(vec![2, 0, 1], vec![1, 2, 3]),
        ];
        for op in &ops {
            let s = op.symplectic(4).unwrap();
            let s_inv = op.adjoint().unwrap().symplectic(4).unwrap();
            let prod = s.compose(&s_inv).unwrap().to_dense();
            assert!(
                prod.max_abs_diff(&RealMatrix::identity(8)) < 1e-14,
                "{op:?}"
            );
        }
        assert!(GateOp::loss(0.5, 0).adjoint().is_err());
    }

    #[test]
    fn butterfly_examples() {
        // R(φ_k + π) on b, then BS(π/4, 0)
        let butterfly = |phi_k: f64, a: Complex64, b: Complex64| {
            let b = b * Complex64::from_polar(1.0, phi_k + std::f64::consts::PI);
            apply_map(&beam_splitter_matrix(FRAC_PI_4, 0.0), &[a, b])
        };
        let out = butterfly(0.0, c(1.0, 0.0), c(1.0, 0.0));
        assert!((out[0] - c(2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(out[1].norm() < 1e-15);
        let out = butterfly(0.0, c(1.0, 0.0), c(0.0, 0.0));
        assert!((out[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((out[1] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let out = butterfly(-FRAC_PI_2, c(0.0, 0.0), c(1.0, 0.0));
        assert!((out[0] - c(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((out[1] - c(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    fn squeezed_pair() -> GaussianState {
        let mut st = GaussianState::vacuum(3).unwrap();
        st.apply_symplectic(&tms_symplectic(0.6, (0, 1), 3).unwrap())
            .unwrap();
        st.apply_symplectic(&tms_symplectic(0.3, (1, 2), 3).unwrap())
            .unwrap();
        st.apply_symplectic(&rotation_symplectic(0.9, 1, 3).unwrap())
            .unwrap();
        st.mean = vec![0.4, -0.2, 1.0, 0.0, 0.3, -0.5];
        st
    }

    #[test]
    fn loss_endpoints() {
        let st = squeezed_pair();
        let mut same = st.clone();
        apply_loss(&mut same, 1, 1.0).unwrap();
        assert_eq!(same, st);

        let mut gone = st.clone();
        apply_loss(&mut gone, 1, 0.0).unwrap();
        let (qx, qp) = (1, 4);
        for k in 0..6 {
            let expected = |q: usize| if k == q { 1.0 } else { 0.0 };
            assert_eq!(gone.cov()[(qx, k)], expected(qx));
            assert_eq!(gone.cov()[(qp, k)], expected(qp));
            assert_eq!(gone.cov()[(k, qx)], expected(qx));
        }
        assert_eq!(gone.mean()[qx], 0.0);
        assert_eq!(gone.mean()[qp], 0.0);
    }

    #[test]
    fn loss_entries_follow_the_affine_rule() {
        let st = squeezed_pair();
        let t = 0.36;
        let mut lossy = st.clone();
        apply_loss(&mut lossy, 1, t).unwrap();
        let (a, b) = (st.cov(), lossy.cov());
        assert!((b[(1, 1)] - (t * a[(1, 1)] + 1.0 - t)).abs() < 1e-15);
        assert!((b[(4, 4)] - (t * a[(4, 4)] + 1.0 - t)).abs() < 1e-15);
        assert!((b[(1, 4)] - t * a[(1, 4)]).abs() < 1e-15);
        assert!((b[(0, 1)] - 0.6 * a[(0, 1)]).abs() < 1e-15);
        assert!((b[(4, 2)] - 0.6 * a[(4, 2)]).abs() < 1e-15);
        assert_eq!(b[(0, 2)], a[(0, 2)]);
        assert!((lossy.mean()[1] - 0.6 * st.mean()[1]).abs() < 1e-15);
    }

    #[test]
    fn two_sided_loss_scales_cross_entries() {
        let st = squeezed_pair();
        let (ti, tj) = (0.49, 0.25);
        let mut lossy = st.clone();
        apply_loss(&mut lossy, 0, ti).unwrap();
        apply_loss(&mut lossy, 2, tj).unwrap();
        let k = (ti * tj).sqrt();
        assert!((lossy.cov()[(0, 2)] - k * st.cov()[(0, 2)]).abs() < 1e-15);
        assert!((lossy.cov()[(0, 5)] - k * st.cov()[(0, 5)]).abs() < 1e-15);
    }

    #[test]
    fn loss_semigroup_and_physicality() {
        let st = squeezed_pair();
        for (t1, t2) in [(0.3, 0.7), (0.9, 0.1), (0.5, 0.5), (0.0, 0.4)] {
            let mut seq = st.clone();
            apply_loss(&mut seq, 1, t1).unwrap();
            apply_loss(&mut seq, 1, t2).unwrap();
            let mut once = st.clone();
            apply_loss(&mut once, 1, t1 * t2).unwrap();
            assert!(seq.cov().max_abs_diff(once.cov()) < 1e-12);
            assert!(seq.check_physicality().min_eigenvalue >= -PHYSICALITY);
        }
    }

    #[test]
    fn loss_rejects_bad_parameters() {
        let mut st = GaussianState::vacuum(2).unwrap();
        assert!(matches!(
            apply_loss(&mut st, 0, 1.5),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            apply_loss(&mut st, 0, -0.1),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            apply_loss(&mut st, 2, 0.5),
            Err(Error::InvalidTargets(_))
        ));
    }

    #[test]
    fn validation_catches_bad_targets() {
        assert!(GateOp::beam_splitter(0.1, 0.0, 0, 0).validate(2).is_err());
        assert!(GateOp::rotation(0.1, 3).validate(2).is_err());
        assert!(GateOp::permutation(vec![0, 0], vec![0, 1])
            .validate(2)
            .is_err());
        assert!(GateOp {
            kind: GateKind::Rotation { phi: 0.0 },
            targets: vec![0, 1]
        }
        .validate(2)
        .is_err());
    }

    #[test]
    fn text_lines_round_trip() {
        let ops = [
            GateOp::two_mode_squeeze(0.25, 0, 3),
            GateOp::rotation(-FRAC_PI_2, 2),
            GateOp::beam_splitter(FRAC_PI_4, 0.0, 0, 1),
            GateOp::loss(0.125, 1),
            GateOp::permutation(vec![0, 2, 1, 3], vec![4, 5, 6, 7]),
            GateOp::interferometer(beam_splitter_matrix(0.3, 1.0), vec![1, 2]),
        ];
        for op in ops {
            let line = op.to_line();
            assert!(line.starts_with("gate "));
            assert_eq!(GateOp::parse_line(&line).unwrap(), op, "{line}");
        }
        assert!(GateOp::parse_line("gate warp 0 1.0").is_err());
        assert!(GateOp::parse_line("gate bs 0,1").is_err());
    }
}
