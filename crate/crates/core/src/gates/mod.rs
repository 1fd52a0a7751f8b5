//! Photonic gate set: symplectic constructors, the loss channel and the
//! rectangular interferometer decomposition.

mod clements;
mod ops;

pub use clements::{clements_decompose, clements_reconstruct, ClementsMesh, MeshElement};
pub use ops::{
    apply_loss, beam_splitter_matrix, beamsplitter_symplectic, rotation_symplectic, tms_symplectic,
    twiddle_phase, GateKind, GateOp,
};
