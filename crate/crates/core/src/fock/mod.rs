//! Truncated Fock spaces: enumeration, sparse matrices of operator
//! expressions, ground states and time evolution.

mod basis;
mod dump;
mod evolve;
mod lanczos;
mod sparse;
mod state;

pub use basis::{apply_ladder, enumerate_basis, Basis, BasisState, ModeSet, Sector, ENUMERATION_LIMIT};
pub use dump::FORMAT_VERSION;
pub use evolve::{evolve, Propagator};
pub use lanczos::{dense_eigenvalues, dense_ground_state, ground_state, ground_state_with, EigenOptions, GroundState};
pub use sparse::{expectation, to_matrix, SparseOperator};
pub use state::{Orbital, StateVector};
