use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{centered_frequency, RealMatrix};

/// Low-pass mask in centered frequency units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MaskSpec {
    /// `|k_r| ≤ cutoff_r` and `|k_c| ≤ cutoff_c`.
    Rectangular { cutoff_r: f64, cutoff_c: f64 },
    /// `k_r² + k_c² ≤ radius²`. Not a product of row and column factors.
    Circular { radius: f64 },
}

impl MaskSpec {
    pub fn rectangular(cutoff: f64) -> Self {
        MaskSpec::Rectangular {
            cutoff_r: cutoff,
            cutoff_c: cutoff,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            MaskSpec::Rectangular { cutoff_r, cutoff_c } => cutoff_r >= 0.0 && cutoff_c >= 0.0,
            MaskSpec::Circular { radius } => radius >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "negative cutoff in {self:?}"
            )))
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MaskSpec::Rectangular { .. } => "rectangular (separable)",
            MaskSpec::Circular { .. } => "circular",
        }
    }

    /// Whether the centered frequency pair passes.
    pub fn passes(&self, kr: i64, kc: i64) -> bool {
        match *self {
            MaskSpec::Rectangular { cutoff_r, cutoff_c } => {
                (kr.abs() as f64) <= cutoff_r && (kc.abs() as f64) <= cutoff_c
            }
            MaskSpec::Circular { radius } => ((kr * kr + kc * kc) as f64) <= radius * radius,
        }
    }

    /// 0/1 mask over an `N × N` spectrum in FFT bin order.
    pub fn indicator(&self, n: usize) -> Result<RealMatrix> {
        self.validate()?;
        Ok(RealMatrix::from_fn(n, n, |i, j| {
            if self.passes(centered_frequency(i, n), centered_frequency(j, n)) {
                1.0
            } else {
                0.0
            }
        }))
    }

    pub fn retained_bins(&self, n: usize) -> Result<usize> {
        Ok(self.indicator(n)?.sum() as usize)
    }
}

/// Per-mode transmissivities for the row and column registers, FFT bin order.
#[derive(Clone, Debug, PartialEq)]
pub struct TransmissivityProfile {
    pub rows: Vec<f64>,
    pub cols: Vec<f64>,
}

impl TransmissivityProfile {
    /// Spectral factor `√(T_i T_j)` applied to bin `(i, j)`.
    pub fn spectral_factor(&self) -> RealMatrix {
        RealMatrix::from_fn(self.rows.len(), self.cols.len(), |i, j| {
            (self.rows[i] * self.cols[j]).sqrt()
        })
    }
}

/// Binary transmissivities for a separable mask on an `N`-point grid.
pub fn mask_transmissivities(mask: &MaskSpec, n: usize) -> Result<TransmissivityProfile> {
    mask.validate()?;
    match *mask {
        MaskSpec::Rectangular { cutoff_r, cutoff_c } => {
            let profile = |cut: f64| {
                (0..n)
                    .map(|i| {
                        if (centered_frequency(i, n).abs() as f64) <= cut {
                            1.0
                        } else {
                            0.0
                        }
                    })
                    .collect()
            };
            Ok(TransmissivityProfile {
                rows: profile(cutoff_r),
                cols: profile(cutoff_c),
            })
        }
        MaskSpec::Circular { .. } => Err(Error::NotSeparable(
            "a circular mask cannot be written as per-mode losses; use the classical oracle".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nyquist_cutoff_keeps_everything() {
        let t = mask_transmissivities(&MaskSpec::rectangular(32.0), 64).unwrap();
        assert!(t.rows.iter().chain(&t.cols).all(|&x| x == 1.0));
    }

    #[test]
    fn default_mask_counts() {
        let rect = MaskSpec::rectangular(10.0);
        let t = mask_transmissivities(&rect, 64).unwrap();
        assert_eq!(t.rows.iter().filter(|&&x| x == 1.0).count(), 21);
        assert_eq!(rect.retained_bins(64).unwrap(), 441);
        assert_eq!(t.spectral_factor(), rect.indicator(64).unwrap());
        assert_eq!(
            MaskSpec::Circular { radius: 10.0 }
                .retained_bins(64)
                .unwrap(),
            317
        );
    }

    #[test]
    fn circular_mask_brute_force_count() {
        // independent count over the signed frequency lattice
        for r in [0i64, 1, 3, 10, 20] {
            let mut count = 0;
            for a in -31i64..=32 {
                for b in -31i64..=32 {
                    if a * a + b * b <= r * r {
                        count += 1;
                    }
                }
            }
            assert_eq!(
                MaskSpec::Circular { radius: r as f64 }
                    .retained_bins(64)
                    .unwrap(),
                count
            );
        }
    }

    #[test]
    fn signal_bins_lie_in_both_masks() {
        let bins = [
            (3, 3),
            (3, -3),
            (-3, 3),
            (-3, -3),
            (7, 0),
            (-7, 0),
            (0, 5),
            (0, -5),
        ];
        for mask in [
            MaskSpec::rectangular(10.0),
            MaskSpec::Circular { radius: 10.0 },
        ] {
            assert!(bins.iter().all(|&(a, b)| mask.passes(a, b)), "{mask:?}");
        }
    }

    #[test]
    fn circular_is_rejected_for_losses() {
        assert!(matches!(
            mask_transmissivities(&MaskSpec::Circular { radius: 10.0 }, 64),
            Err(Error::NotSeparable(_))
        ));
        assert!(MaskSpec::rectangular(-1.0).validate().is_err());
    }

    #[test]
    fn serde_tagged_form() {
        let m: MaskSpec = serde_json::from_str(r#"{"kind":"circular","radius":10}"#).unwrap();
        assert_eq!(m, MaskSpec::Circular { radius: 10.0 });
        let m: MaskSpec =
            serde_json::from_str(r#"{"kind":"rectangular","cutoff_r":4,"cutoff_c":6}"#).unwrap();
        assert_eq!(
            m,
            MaskSpec::Rectangular {
                cutoff_r: 4.0,
                cutoff_c: 6.0
            }
        );
    }
}
