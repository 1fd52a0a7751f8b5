//! Gaussian-state backend: mean vector and covariance matrix in `xxpp`
//! ordering (`ħ = 2`), evolved by symplectic maps.

mod state;
mod symplectic;

pub use state::{GaussianState, PhysicalityReport, RegisterLayout};
pub use symplectic::{omega, quadrature_indices, symplectic_from_unitary, SymplecticMatrix};
