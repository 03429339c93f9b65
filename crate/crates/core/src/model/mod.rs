//! The box-discretized Dirac field with its Coulomb interaction.

mod config;
mod hamiltonian;
mod kernel;
mod observables;
mod spinor;

pub use config::ModelConfig;
pub use hamiltonian::{
    bad_electron_term, coulomb_full, coulomb_partial, coulomb_pieces, external_potential_term, free_hamiltonian,
    CoulombPieces, ExternalPotential, Model, Part,
};
pub use kernel::{bare_kernel, bessel_k0, coulomb_kernel, CoulombKernel};
pub use observables::{gaussian_packet, one_particle_amplitudes, position_spread};
pub use spinor::{build_spinors, dirac_matrix, dispersion, inner, plane_wave, Spinor, SpinorEntry, SpinorTable};
