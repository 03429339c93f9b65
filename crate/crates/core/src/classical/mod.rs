//! Classical Dirac-field configurations on a periodic spatial grid and their
//! electrostatic self-energy.

mod dump;
mod energy;
mod field;
mod grid;

pub use dump::{decode_grid, GridDump};
pub use energy::{
    coulomb_energy, coulomb_energy_direct, coulomb_energy_with, cross_energy, decomposition_report, gaussian_cloud,
    half_space_split, identical_halves, KernelOptions, SplitEnergies,
};
pub use field::{charge_density, free_evolve, synthesize_field, ChargeDensityField, ClassicalModeState, DiracField};
pub use grid::SpatialGrid;
