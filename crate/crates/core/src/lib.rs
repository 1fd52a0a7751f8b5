//! Classical simulator for a continuous-variable (CV) photonic Fourier layer.
//!
//! A real `m × n` matrix is loaded into the inter-register `x–x` block of a
//! bipartite Gaussian covariance matrix (SVD + two-mode squeezing + passive
//! interferometers). Radix-2 Cooley–Tukey butterfly circuits built from phase
//! rotations and 50:50 beam splitters then act on each register, and the
//! two-dimensional unitary DFT of the matrix is read back from the `x–x` and
//! `x–p` cross blocks. Loss channels programmed per mode turn the layer into a
//! spectral low-pass filter or an exact heat-equation propagator.
//!
//! Everything is simulated at the level of first and second moments
//! (`ħ = 2`, vacuum covariance `I`, `xxpp` quadrature ordering).

pub mod encoder;
pub mod error;
pub mod gates;
pub mod gaussian;
pub mod io;
pub mod numerics;
pub mod qft;
pub mod spectral;

pub use error::{Error, Result};
