use thiserror::Error;

use crate::algebra::Mode;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode {0} is not part of the mode set")]
    ModeNotInSet(Mode),

    #[error("mode set holds {0} modes; at most 64 fit in an occupancy word")]
    TooManyModes(usize),

    #[error("inconsistent sector constraints: {0}")]
    InconsistentSector(String),

    #[error("sector enumeration exceeds {limit} states")]
    SectorTooLarge { limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max |H - H^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("time evolution produced a non-finite amplitude at t = {0}")]
    NonFinite(f64),

    #[error("invalid time step {0}; must be finite and positive")]
    InvalidTimeStep(f64),

    #[error("eigensolver did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("empty sector")]
    EmptySector,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("operator parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("decode error: {0}")]
    Decode(String),

    #[error("split does not sum to the total density (max deviation {0:e})")]
    SplitMismatch(f64),

    #[error("potential is not real in position space (max asymmetry {0:e})")]
    ComplexPotential(f64),

    #[error("mode cutoff {cutoff} aliases on a grid of {points} points per axis")]
    Aliasing { cutoff: i32, points: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
