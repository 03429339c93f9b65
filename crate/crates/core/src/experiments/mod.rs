//! Configured runs of the workbench's checks, each producing a
//! [`ResultRecord`] of scalars, series and pass/fail verdicts.

mod config;
mod record;
mod runs;
mod svg;

pub use config::{
    ClassicalConfig, ExperimentConfig, ImmunityConfig, SignsConfig, SpreadConfig, TimeGrid, VacuumConfig, SCHEMA_VERSION,
};
pub use record::{Relation, ResultRecord, Series, Truncation, Verdict};
pub use runs::{
    run_by_name, run_classical_suite, run_sign_of_forces, run_single_electron_immunity, run_spreading_comparison,
    run_vacuum_instability,
};
pub use svg::line_chart;

pub const EXPERIMENTS: [&str; 5] = ["immunity", "spread", "signs", "vacuum", "classical"];
