//! Quantum electrostatics workbench.
//!
//! Builds Coulomb-gauge Hamiltonians of a box-discretized Dirac field as
//! symbolic fermionic operator expressions, represents them as sparse
//! matrices on truncated Fock sectors, and checks which orderings of the
//! Coulomb term let a lone electron interact with itself.

pub mod algebra;
pub mod classical;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod model;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64;
