use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical and truncation parameters of one box-discretized model.
///
/// Quantities are in the internal dimensionless system unless noted; the
/// defaults set `hbar = c = m = 1` and `e^2` to the fine-structure constant,
/// see [`crate::units`] for the conversion to Gaussian cgs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    /// Spatial dimension, 1 or 3.
    pub dimension: u8,
    /// Side of the periodic box.
    pub box_length: f64,
    /// Per-axis cutoff `|n_i| <= n_max` on lattice vectors.
    pub n_max: u32,
    /// Optional spherical cutoff `|n|^2 <= r2` applied on top of `n_max`;
    /// written `"none"` in files when absent.
    #[serde(with = "norm_cutoff")]
    pub max_norm_sq: Option<u32>,
    pub mass: f64,
    /// Elementary charge `e`; the coupling is `e^2`.
    pub charge: f64,
    pub hbar: f64,
    pub c: f64,
    /// Kernel value used at `q = 0`; the mode is dropped when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_mode_value: Option<f64>,
    /// Softening length `a` of the 1D kernel; defaults to `L / 100`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub softening: Option<f64>,
    /// Particle-number cap of the default sectors.
    pub max_particles: u32,
}

mod norm_cutoff {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Value(u32),
        Word(String),
    }

    pub fn serialize<S: Serializer>(v: &Option<u32>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => Repr::Value(*r),
            None => Repr::Word("none".into()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u32>, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Value(r) => Ok(Some(r)),
            Repr::Word(w) if w == "none" => Ok(None),
            Repr::Word(w) => Err(serde::de::Error::custom(format!("max_norm_sq must be an integer or \"none\", got {w:?}"))),
        }
    }
}

const ALPHA: f64 = 0.0072973525693;

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            dimension: 3,
            box_length: 2.0 * std::f64::consts::PI,
            n_max: 1,
            max_norm_sq: Some(1),
            mass: 1.0,
            charge: ALPHA.sqrt(),
            hbar: 1.0,
            c: 1.0,
            zero_mode_value: None,
            softening: None,
            max_particles: 2,
        }
    }
}

impl ModelConfig {
    /// Small 1D configuration: five momenta, twenty modes.
    pub fn one_dimensional() -> Self {
        ModelConfig { dimension: 1, n_max: 2, max_norm_sq: None, ..ModelConfig::default() }
    }

    pub fn with_charge(mut self, e: f64) -> Self {
        self.charge = e;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension != 1 && self.dimension != 3 {
            return Err(Error::Config(format!("dimension must be 1 or 3, got {}", self.dimension)));
        }
        let positive = [("box_length", self.box_length), ("hbar", self.hbar), ("c", self.c)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        // zero mass and zero charge are admitted as the massless and free limits
        for (name, v) in [("mass", self.mass), ("charge", self.charge)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!("{name} must be non-negative and finite, got {v}")));
            }
        }
        if let Some(v) = self.zero_mode_value {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!("zero_mode_value must be non-negative, got {v}")));
            }
        }
        if let Some(a) = self.softening {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::Config(format!("softening must be positive, got {a}")));
            }
        }
        if self.n_max > 64 {
            return Err(Error::Config(format!("n_max {} is beyond any representable mode set", self.n_max)));
        }
        Ok(())
    }

    pub fn volume(&self) -> f64 {
        self.box_length.powi(self.dimension as i32)
    }

    /// Wave-number spacing `2 pi / L`.
    pub fn dk(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.box_length
    }

    /// Physical momentum `hbar k` of lattice vector `n`.
    pub fn momentum(&self, n: [i32; 3]) -> [f64; 3] {
        let s = self.hbar * self.dk();
        [s * n[0] as f64, s * n[1] as f64, s * n[2] as f64]
    }

    pub fn softening_length(&self) -> f64 {
        self.softening.unwrap_or(self.box_length / 100.0)
    }

    /// Lattice vectors inside the cutoff, lexicographically ordered. Unused
    /// axes carry zero.
    pub fn lattice(&self) -> Vec<[i32; 3]> {
        let m = self.n_max as i32;
        let r = if self.dimension == 3 { m } else { 0 };
        let mut out = Vec::new();
        for x in -m..=m {
            for y in -r..=r {
                for z in -r..=r {
                    let n2 = (x * x + y * y + z * z) as u32;
                    if self.max_norm_sq.is_none_or(|c| n2 <= c) {
                        out.push([x, y, z]);
                    }
                }
            }
        }
        out
    }
}
