use std::collections::BTreeMap;

use super::config::ModelConfig;
use crate::error::Result;

/// `K_0(z) = int_0^inf exp(-z cosh t) dt` for `z > 0`.
///
/// The integrand is analytic and decays doubly exponentially, so the
/// trapezoid rule converges geometrically in the step; `h = 1/32` with the
/// tail cut where the integrand underflows is accurate to rounding.
pub fn bessel_k0(z: f64) -> f64 {
    assert!(z > 0.0, "K0 needs a positive argument");
    let t_max = (745.0 / z).max(1.0).acosh() + 1.0;
    let h = 1.0 / 32.0;
    let steps = (t_max / h).ceil() as usize;
    let mut sum = 0.5 * (-z).exp();
    for i in 1..=steps {
        sum += (-z * (i as f64 * h).cosh()).exp();
    }
    sum * h
}

/// Fourier transform of the interaction `1/r` (3D) or `1/sqrt(x^2 + a^2)`
/// (1D) at wave vector `k != 0`, without the `e^2`.
pub fn bare_kernel(dimension: u8, k: [f64; 3], softening: f64) -> f64 {
    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    match dimension {
        3 => 4.0 * std::f64::consts::PI / k2,
        _ => 2.0 * bessel_k0(k2.sqrt() * softening),
    }
}

/// `V(q)` for every momentum transfer between two lattice momenta.
#[derive(Clone, Debug)]
pub struct CoulombKernel {
    values: BTreeMap<[i32; 3], f64>,
}

impl CoulombKernel {
    pub fn new(cfg: &ModelConfig) -> Result<Self> {
        cfg.validate()?;
        let lattice = cfg.lattice();
        let e2 = cfg.charge * cfg.charge;
        let dk = cfg.dk();
        let a = cfg.softening_length();
        let mut values = BTreeMap::new();
        for k1 in &lattice {
            for k2 in &lattice {
                let q = [k2[0] - k1[0], k2[1] - k1[1], k2[2] - k1[2]];
                if values.contains_key(&q) {
                    continue;
                }
                let v = if q == [0, 0, 0] {
                    match cfg.zero_mode_value {
                        Some(v) => e2 * v,
                        None => continue,
                    }
                } else {
                    let k = [dk * q[0] as f64, dk * q[1] as f64, dk * q[2] as f64];
                    e2 * bare_kernel(cfg.dimension, k, a)
                };
                values.insert(q, v);
            }
        }
        Ok(CoulombKernel { values })
    }

    /// Zero for transfers outside the table, including a dropped `q = 0`.
    pub fn get(&self, q: [i32; 3]) -> f64 {
        self.values.get(&q).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ([i32; 3], f64)> + '_ {
        self.values.iter().map(|(q, v)| (*q, *v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn coulomb_kernel(cfg: &ModelConfig) -> Result<CoulombKernel> {
    CoulombKernel::new(cfg)
}
