//! Classical electrostatic energy `U = (1/2) int int rho(x) rho(y) / |x - y|`
//! of a periodic density, evaluated in momentum space as
//! `U = (1/2V) sum_{q != 0} K(q) |rho_q|^2` with `rho_q = dV sum_x rho(x) e^{-iqx}`.

use num_complex::Complex64;
use serde::Serialize;

use super::field::ChargeDensityField;
use super::grid::{fft_forward, SpatialGrid};
use crate::error::{Error, Result};
use crate::model::bare_kernel;

/// Treatment of the interaction kernel on the grid.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct KernelOptions {
    /// Kernel used at `q = 0`; dropped (neutralizing background) if absent.
    pub zero_mode_value: Option<f64>,
    /// 1D softening length; `L / 100` if absent.
    pub softening: Option<f64>,
}

impl KernelOptions {
    fn value(&self, grid: &SpatialGrid, n: [i32; 3]) -> f64 {
        if n == [0, 0, 0] {
            return self.zero_mode_value.unwrap_or(0.0);
        }
        let dk = 2.0 * std::f64::consts::PI / grid.length;
        let k = [dk * n[0] as f64, dk * n[1] as f64, dk * n[2] as f64];
        bare_kernel(grid.dimension, k, self.softening.unwrap_or(grid.length / 100.0))
    }
}

fn transform(rho: &ChargeDensityField) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = rho.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_forward(&rho.grid, &mut data);
    let dv = rho.grid.cell_volume();
    data.iter_mut().for_each(|x| *x *= dv);
    data
}

fn kernel_table(grid: &SpatialGrid, opts: &KernelOptions) -> Vec<f64> {
    (0..grid.len()).map(|b| opts.value(grid, grid.wave_vector(grid.ijk(b)))).collect()
}

/// `(1/V) sum_q K(q) Re(a_q conj(b_q))`, the symmetric bilinear form with
/// `U(rho) = B(rho, rho) / 2`.
fn bilinear(grid: &SpatialGrid, kernel: &[f64], a: &[Complex64], b: &[Complex64]) -> f64 {
    let s: f64 = kernel.iter().zip(a.iter().zip(b)).map(|(k, (x, y))| k * (x * y.conj()).re).sum();
    s / grid.volume()
}

pub fn coulomb_energy(rho: &ChargeDensityField) -> f64 {
    coulomb_energy_with(rho, &KernelOptions::default())
}

pub fn coulomb_energy_with(rho: &ChargeDensityField, opts: &KernelOptions) -> f64 {
    let kernel = kernel_table(&rho.grid, opts);
    let r = transform(rho);
    0.5 * bilinear(&rho.grid, &kernel, &r, &r)
}

/// Interaction energy `int int rho1(x) rho2(y) / |x - y|` between two
/// densities, so that `U(rho1 + rho2) = U(rho1) + U(rho2) + cross`.
pub fn cross_energy(a: &ChargeDensityField, b: &ChargeDensityField, opts: &KernelOptions) -> Result<f64> {
    a.check_same_grid(b)?;
    let kernel = kernel_table(&a.grid, opts);
    Ok(bilinear(&a.grid, &kernel, &transform(a), &transform(b)))
}

/// Real-space evaluation `(1/2) dV^2 sum_{x,y} rho(x) rho(y) W(x - y)` with
/// the periodic kernel `W(r) = (1/V) sum_q K(q) e^{iqr}` built by explicit
/// trigonometric sums. `O(N^2)` in the number of grid points; a test oracle.
pub fn coulomb_energy_direct(rho: &ChargeDensityField, opts: &KernelOptions) -> f64 {
    let grid = rho.grid;
    let shape = grid.shape();
    let n = grid.len();
    let tau = 2.0 * std::f64::consts::PI;
    let trig: Vec<Vec<Vec<Complex64>>> = (0..3)
        .map(|a| {
            (0..shape[a])
                .map(|m| {
                    let f = if shape[a] == 1 { 0 } else { grid.frequency(m) };
                    (0..shape[a]).map(|j| Complex64::from_polar(1.0, tau * (f as f64) * j as f64 / shape[a] as f64)).collect()
                })
                .collect()
        })
        .collect();
    let mut w = vec![0.0; n];
    for qb in 0..n {
        let qi = grid.ijk(qb);
        let kq = opts.value(&grid, grid.wave_vector(qi));
        if kq == 0.0 {
            continue;
        }
        for (rb, wr) in w.iter_mut().enumerate() {
            let r = grid.ijk(rb);
            let ph = trig[0][qi[0]][r[0]] * trig[1][qi[1]][r[1]] * trig[2][qi[2]][r[2]];
            *wr += kq * ph.re;
        }
    }
    let v = grid.volume();
    w.iter_mut().for_each(|x| *x /= v);
    let mut total = 0.0;
    for x in 0..n {
        let xi = grid.ijk(x);
        let mut row = 0.0;
        for y in 0..n {
            let yi = grid.ijk(y);
            let d = [0, 1, 2].map(|a| (xi[a] + shape[a] - yi[a]) % shape[a]);
            row += rho.values[y] * w[grid.index(d)];
        }
        total += rho.values[x] * row;
    }
    0.5 * total * grid.cell_volume().powi(2)
}

/// Periodically wrapped Gaussian of width `sigma` centred at `center`,
/// rescaled so the grid sum carries exactly `charge`.
pub fn gaussian_cloud(grid: &SpatialGrid, center: [f64; 3], sigma: f64, charge: f64) -> ChargeDensityField {
    let l = grid.length;
    let d = grid.dimension as usize;
    let images = 3;
    let mut values = Vec::with_capacity(grid.len());
    for b in 0..grid.len() {
        let x = grid.position(grid.ijk(b));
        let mut per_axis = [1.0; 3];
        for a in 0..d {
            let mut s = 0.0;
            for img in -images..=images {
                let dx = x[a] - center[a] + img as f64 * l;
                s += (-0.5 * dx * dx / (sigma * sigma)).exp();
            }
            per_axis[a] = s;
        }
        values.push(per_axis.iter().product());
    }
    let total: f64 = values.iter().sum::<f64>() * grid.cell_volume();
    let rho = ChargeDensityField { grid: *grid, values };
    rho.scale(charge / total)
}

/// Energies of one way of splitting a density into two parts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitEnergies {
    pub label: String,
    pub self_1: f64,
    pub self_2: f64,
    pub cross: f64,
    pub total: f64,
}

impl SplitEnergies {
    pub fn self_sum(&self) -> f64 {
        self.self_1 + self.self_2
    }
}

/// Self, cross and total energies for each labelled split of `total`.
pub fn decomposition_report(
    total: &ChargeDensityField,
    splits: &[(String, ChargeDensityField, ChargeDensityField)],
    opts: &KernelOptions,
) -> Result<Vec<SplitEnergies>> {
    let scale = total.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut out = Vec::with_capacity(splits.len());
    for (label, a, b) in splits {
        total.check_same_grid(a)?;
        total.check_same_grid(b)?;
        let dev = total
            .values
            .iter()
            .zip(a.values.iter().zip(&b.values))
            .map(|(t, (x, y))| (t - x - y).abs())
            .fold(0.0, f64::max);
        if dev > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::SplitMismatch(dev));
        }
        let self_1 = coulomb_energy_with(a, opts);
        let self_2 = coulomb_energy_with(b, opts);
        let cross = cross_energy(a, b, opts)?;
        out.push(SplitEnergies { label: label.clone(), self_1, self_2, cross, total: self_1 + self_2 + cross });
    }
    Ok(out)
}

/// `(rho/2, rho/2)`.
pub fn identical_halves(rho: &ChargeDensityField) -> (ChargeDensityField, ChargeDensityField) {
    (rho.scale(0.5), rho.scale(0.5))
}

/// Cut along the last used axis at `plane` and `plane + L/2`: points with
/// offset in `(0, L/2)` go to the first part, in `(L/2, L)` to the second,
/// and points on either cut plane are shared equally.
pub fn half_space_split(rho: &ChargeDensityField, plane: usize) -> (ChargeDensityField, ChargeDensityField) {
    let grid = rho.grid;
    let g = grid.points;
    let axis = if grid.dimension == 3 { 2 } else { 0 };
    let mut a = ChargeDensityField::zeros(grid);
    let mut b = ChargeDensityField::zeros(grid);
    for (i, &v) in rho.values.iter().enumerate() {
        let off = (grid.ijk(i)[axis] + g - plane % g) % g;
        let w = if off == 0 || off == g / 2 {
            0.5
        } else if off < g / 2 {
            1.0
        } else {
            0.0
        };
        a.values[i] = w * v;
        b.values[i] = v - w * v;
    }
    (a, b)
}
