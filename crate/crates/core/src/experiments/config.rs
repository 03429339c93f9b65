use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fock::Sector;
use crate::model::ModelConfig;

pub const SCHEMA_VERSION: u32 = 1;

const ALPHA: f64 = 0.0072973525693;

/// Sampling times `t_j = j T / (samples - 1)`, with `T` the given number of
/// rest-energy periods `2 pi hbar / (m c^2)` unless `t_end` overrides it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeGrid {
    pub periods: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    pub samples: usize,
    /// Upper bound on the propagator step.
    pub dt: f64,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid { periods: 10.0, t_end: None, samples: 41, dt: 0.5 }
    }
}

impl TimeGrid {
    pub fn period(cfg: &ModelConfig) -> f64 {
        2.0 * std::f64::consts::PI * cfg.hbar / (cfg.mass * cfg.c * cfg.c)
    }

    pub fn end(&self, cfg: &ModelConfig) -> f64 {
        self.t_end.unwrap_or(self.periods * Self::period(cfg))
    }

    pub fn times(&self, cfg: &ModelConfig) -> Result<Vec<f64>> {
        let end = self.end(cfg);
        if self.samples < 2 || !(end.is_finite() && end > 0.0) {
            return Err(Error::Config(format!("time grid needs >= 2 samples and a positive end, got {} to {end}", self.samples)));
        }
        let n = (self.samples - 1) as f64;
        Ok((0..self.samples).map(|j| end * j as f64 / n).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ImmunityConfig {
    pub sector: Sector,
    pub time: TimeGrid,
    pub tolerance: f64,
    /// Also evolve inside the larger same-charge sector with this particle
    /// cap, where the pair-creating terms act; reported, not judged.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dressed_max_particles: Option<u32>,
}

impl Default for ImmunityConfig {
    fn default() -> Self {
        ImmunityConfig {
            sector: Sector::all().with_particles(1).with_charge(-1),
            time: TimeGrid::default(),
            tolerance: 1e-9,
            dressed_max_particles: Some(3),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpreadConfig {
    pub time: TimeGrid,
    /// Packet width in position space.
    pub sigma: f64,
    pub center: [f64; 3],
    pub spin: u8,
    /// Points per axis of the position grid for the spread.
    pub grid_points: usize,
    pub identical_tolerance: f64,
    pub min_deviation: f64,
    /// Nuclear charge for the bound-state comparison; skipped at 0.
    pub nucleus_charge: f64,
}

impl Default for SpreadConfig {
    fn default() -> Self {
        SpreadConfig {
            time: TimeGrid::default(),
            sigma: 1.0,
            center: [0.0; 3],
            spin: 1,
            grid_points: 16,
            identical_tolerance: 1e-9,
            min_deviation: 1e-6,
            nucleus_charge: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SignsConfig {
    pub sigma: f64,
    pub center: [f64; 3],
}

impl Default for SignsConfig {
    fn default() -> Self {
        SignsConfig { sigma: 1.0, center: [0.0; 3] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VacuumConfig {
    pub sector: Sector,
    /// Couplings `e^2`, run in the given order.
    pub couplings: Vec<f64>,
    /// Model for the dense-diagonalization check.
    pub dense_model: ModelConfig,
    pub dense_max_dim: usize,
    pub dense_tolerance: f64,
    pub eigen_tolerance: f64,
}

impl Default for VacuumConfig {
    fn default() -> Self {
        VacuumConfig {
            sector: Sector::all().with_max_particles(4).with_charge(0).with_momentum([0; 3]),
            couplings: vec![ALPHA, ALPHA / 2.0, ALPHA / 4.0, ALPHA / 8.0],
            dense_model: ModelConfig { n_max: 1, ..ModelConfig::one_dimensional() },
            dense_max_dim: 200,
            dense_tolerance: 1e-9,
            eigen_tolerance: 1e-12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassicalConfig {
    /// Points per axis of the 3D scaling grid.
    pub points: usize,
    pub sigma: f64,
    /// Box side in units of the width, held fixed along the sweep.
    pub box_per_sigma: f64,
    pub width_factors: Vec<f64>,
    pub scaling_tolerance: f64,
    pub oracle_points_3d: usize,
    pub oracle_points_1d: usize,
    pub oracle_tolerance: f64,
    /// Total charge `-2e` cloud for the decomposition report.
    pub split_points: usize,
    pub split_box_length: f64,
    pub split_sigma: f64,
    pub split_tolerance: f64,
    pub charge_grid_points: usize,
    pub charge_tolerance: f64,
}

impl Default for ClassicalConfig {
    fn default() -> Self {
        ClassicalConfig {
            points: 32,
            sigma: 0.25,
            box_per_sigma: 8.0,
            width_factors: vec![1.0, 2.0, 4.0],
            scaling_tolerance: 1e-4,
            oracle_points_3d: 16,
            oracle_points_1d: 32,
            oracle_tolerance: 1e-6,
            split_points: 32,
            split_box_length: 4.0,
            split_sigma: 0.4,
            split_tolerance: 1e-10,
            charge_grid_points: 16,
            charge_tolerance: 1e-10,
        }
    }
}

/// One experiment file: the model, the seed and per-experiment parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub seed: u64,
    pub model: ModelConfig,
    pub immunity: ImmunityConfig,
    pub spread: SpreadConfig,
    pub signs: SignsConfig,
    pub vacuum: VacuumConfig,
    pub classical: ClassicalConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schema: SCHEMA_VERSION,
            seed: 1,
            model: ModelConfig::default(),
            immunity: ImmunityConfig::default(),
            spread: SpreadConfig::default(),
            signs: SignsConfig::default(),
            vacuum: VacuumConfig::default(),
            classical: ClassicalConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported schema {}, expected {SCHEMA_VERSION}", self.schema)));
        }
        self.model.validate()?;
        self.vacuum.dense_model.validate()?;
        if self.model.mass == 0.0 {
            return Err(Error::Config("time grids are measured in rest-energy periods; mass must be positive".into()));
        }
        if self.vacuum.couplings.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(Error::Config("couplings must be finite and non-negative".into()));
        }
        Ok(())
    }

    /// SHA-256 of the canonical TOML form, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = ExperimentConfig::default();
        let back = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
        assert_eq!(cfg.hash().len(), 64);
    }

    #[test]
    fn partial_files_fill_defaults() {
        let cfg = ExperimentConfig::from_toml("seed = 7\n[model]\ndimension = 1\n[spread]\nsigma = 0.5\n").unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.model.dimension, 1);
        assert_eq!(cfg.spread.sigma, 0.5);
        assert_eq!(cfg.spread.grid_points, 16);
        assert_ne!(cfg.hash(), ExperimentConfig::default().hash());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(ExperimentConfig::from_toml("schema = 2").is_err());
        assert!(ExperimentConfig::from_toml("colour = 1").is_err());
        assert!(ExperimentConfig::from_toml("[vacuum]\ncouplings = [-1.0]").is_err());
        assert!(ExperimentConfig::from_toml("[model]\nmass = 0.0").is_err());
    }

    #[test]
    fn time_grid() {
        let cfg = ModelConfig::default();
        let t = TimeGrid { samples: 3, ..TimeGrid::default() }.times(&cfg).unwrap();
        assert_eq!(t, vec![0.0, 10.0 * std::f64::consts::PI, 20.0 * std::f64::consts::PI]);
        assert!(TimeGrid { samples: 1, ..TimeGrid::default() }.times(&cfg).is_err());
    }
}
