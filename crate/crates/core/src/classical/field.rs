use std::collections::BTreeMap;

use num_complex::Complex64;

use super::grid::SpatialGrid;
use crate::algebra::{Mode, Species};
use crate::error::{Error, Result};
use crate::model::{plane_wave, ModelConfig, Spinor};

/// Mode coefficients of a classical Dirac field in the box.
///
/// Electron modes hold `b^s(p)`, the weight of `u^s(p) e^{ipx}`; positron
/// modes hold the weight of `v^s(p) e^{-ipx}` (the classical `d^{s+}(p)`).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ClassicalModeState {
    pub coeffs: BTreeMap<Mode, Complex64>,
}

impl ClassicalModeState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, mode: Mode, c: Complex64) -> Self {
        self.set(mode, c);
        self
    }

    pub fn set(&mut self, mode: Mode, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&mode);
        } else {
            self.coeffs.insert(mode, c);
        }
    }

    pub fn get(&self, mode: &Mode) -> Complex64 {
        self.coeffs.get(mode).copied().unwrap_or_default()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        ClassicalModeState { coeffs: self.coeffs.iter().map(|(m, c)| (*m, c * a)).collect() }
    }

    /// `sum |b|^2 + sum |d|^2`, equal to `int psi+ psi`.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Self {
        self.scale(Complex64::new(1.0 / self.norm_sqr().sqrt(), 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.values().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `b -> b e^{-iEt/hbar}`, `d+ -> d+ e^{+iEt/hbar}`.
    pub fn free_evolve(&self, cfg: &ModelConfig, t: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(m, c)| {
                let e = crate::model::dispersion(cfg, m.momentum);
                let sign = if m.species == Species::Electron { -1.0 } else { 1.0 };
                (*m, c * Complex64::from_polar(1.0, sign * e * t / cfg.hbar))
            })
            .collect();
        ClassicalModeState { coeffs }
    }
}

pub fn free_evolve(cfg: &ModelConfig, st: &ClassicalModeState, t: f64) -> ClassicalModeState {
    st.free_evolve(cfg, t)
}

/// Four-component field samples, one per grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracField {
    pub grid: SpatialGrid,
    pub values: Vec<Spinor>,
}

/// Charge per unit volume at each grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct ChargeDensityField {
    pub grid: SpatialGrid,
    pub values: Vec<f64>,
}

impl ChargeDensityField {
    pub fn zeros(grid: SpatialGrid) -> Self {
        ChargeDensityField { grid, values: vec![0.0; grid.len()] }
    }

    pub fn total_charge(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn scale(&self, a: f64) -> Self {
        ChargeDensityField { grid: self.grid, values: self.values.iter().map(|v| v * a).collect() }
    }

    pub fn add(&self, other: &ChargeDensityField) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(ChargeDensityField { grid: self.grid, values })
    }

    pub(crate) fn check_same_grid(&self, other: &ChargeDensityField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::DimensionMismatch { expected: self.grid.len(), found: other.grid.len() });
        }
        Ok(())
    }
}

/// `psi(x) = V^{-1/2} sum_{p,s} [ b u~ e^{ipx} + d+ v~ e^{-ipx} ]` on the grid,
/// where `u~ = u / sqrt(2E)`.
pub fn synthesize_field(cfg: &ModelConfig, st: &ClassicalModeState, grid: &SpatialGrid) -> Result<DiracField> {
    cfg.validate()?;
    if grid.dimension != cfg.dimension || grid.length != cfg.box_length {
        return Err(Error::Config("grid and model describe different boxes".into()));
    }
    if !st.is_finite() {
        return Err(Error::NonFinite(0.0));
    }
    let shape = grid.shape();
    let dk = cfg.dk();
    let h = grid.spacing();
    let norm = 1.0 / grid.volume().sqrt();
    let mut values = vec![[Complex64::new(0.0, 0.0); 4]; grid.len()];
    for (m, c) in &st.coeffs {
        grid.check_band_limit(m.momentum)?;
        let sp = plane_wave(cfg, m.momentum)?;
        let w = 1.0 / (2.0 * sp.energy).sqrt();
        let (spinor, sign) = match m.species {
            Species::Electron => (sp.u[(m.spin - 1) as usize], 1.0),
            Species::Positron => (sp.v[(m.spin - 1) as usize], -1.0),
        };
        let amp = spinor.map(|x| x * c * (w * norm));
        // per-axis phase tables
        let phases: Vec<Vec<Complex64>> = (0..3)
            .map(|a| {
                (0..shape[a])
                    .map(|j| Complex64::from_polar(1.0, sign * dk * m.momentum[a] as f64 * j as f64 * h))
                    .collect()
            })
            .collect();
        for (idx, v) in values.iter_mut().enumerate() {
            let ijk = grid.ijk(idx);
            let ph = phases[0][ijk[0]] * phases[1][ijk[1]] * phases[2][ijk[2]];
            for (vi, ai) in v.iter_mut().zip(&amp) {
                *vi += ai * ph;
            }
        }
    }
    Ok(DiracField { grid: *grid, values })
}

/// `rho = -e psi+ psi` pointwise.
pub fn charge_density(psi: &DiracField, e: f64) -> ChargeDensityField {
    let values = psi.values.iter().map(|v| -e * v.iter().map(|x| x.norm_sqr()).sum::<f64>()).collect();
    ChargeDensityField { grid: psi.grid, values }
}
