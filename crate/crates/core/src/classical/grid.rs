use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic grid of `points` samples per axis on `[0, L)^d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    pub dimension: u8,
    pub length: f64,
    pub points: usize,
}

impl SpatialGrid {
    pub fn new(dimension: u8, length: f64, points: usize) -> Result<Self> {
        if dimension != 1 && dimension != 3 {
            return Err(Error::Config(format!("grid dimension must be 1 or 3, got {dimension}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Config(format!("grid length must be positive, got {length}")));
        }
        if points < 2 || !points.is_power_of_two() {
            return Err(Error::Config(format!("points per axis must be a power of two, got {points}")));
        }
        if dimension == 3 && points > 256 {
            return Err(Error::Config(format!("{points}^3 grid is too large")));
        }
        Ok(SpatialGrid { dimension, length, points })
    }

    /// Extent along x, y, z; unused axes have one point.
    pub fn shape(&self) -> [usize; 3] {
        if self.dimension == 3 {
            [self.points; 3]
        } else {
            [self.points, 1, 1]
        }
    }

    pub fn len(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dimension as i32)
    }

    pub fn volume(&self) -> f64 {
        self.length.powi(self.dimension as i32)
    }

    pub fn index(&self, ijk: [usize; 3]) -> usize {
        let s = self.shape();
        (ijk[0] * s[1] + ijk[1]) * s[2] + ijk[2]
    }

    pub fn ijk(&self, index: usize) -> [usize; 3] {
        let s = self.shape();
        [index / (s[1] * s[2]), (index / s[2]) % s[1], index % s[2]]
    }

    pub fn position(&self, ijk: [usize; 3]) -> [f64; 3] {
        let h = self.spacing();
        [ijk[0] as f64 * h, ijk[1] as f64 * h, ijk[2] as f64 * h]
    }

    /// Signed frequency of FFT bin `j`, in `[-G/2, G/2)`.
    pub fn frequency(&self, j: usize) -> i32 {
        let g = self.points as i32;
        let j = j as i32;
        if j < g / 2 { j } else { j - g }
    }

    /// Lattice vector of FFT bin `ijk`.
    pub fn wave_vector(&self, ijk: [usize; 3]) -> [i32; 3] {
        let s = self.shape();
        let f = |a: usize| if s[a] == 1 { 0 } else { self.frequency(ijk[a]) };
        [f(0), f(1), f(2)]
    }

    /// Lattice vectors with `|n_i| >= G/2` cannot be represented.
    pub fn check_band_limit(&self, n: [i32; 3]) -> Result<()> {
        let nyquist = (self.points / 2) as i32;
        let used = self.dimension as usize;
        let worst = n[..used].iter().map(|v| v.abs()).max().unwrap_or(0);
        if worst >= nyquist || n[used..].iter().any(|&v| v != 0) {
            return Err(Error::Aliasing { cutoff: worst, points: self.points });
        }
        Ok(())
    }
}

/// In-place unnormalized forward transform `sum_x f(x) e^{-i k x}` along
/// every used axis.
pub(crate) fn fft_forward(grid: &SpatialGrid, data: &mut [Complex64]) {
    let shape = grid.shape();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(grid.points);
    let mut line = vec![Complex64::new(0.0, 0.0); grid.points];
    let strides = [shape[1] * shape[2], shape[2], 1];
    for axis in 0..3 {
        if shape[axis] == 1 {
            continue;
        }
        let stride = strides[axis];
        for base in 0..data.len() {
            // visit each line once, from its first element
            if (base / stride) % shape[axis] != 0 {
                continue;
            }
            for (j, l) in line.iter_mut().enumerate() {
                *l = data[base + j * stride];
            }
            fft.process(&mut line);
            for (j, l) in line.iter().enumerate() {
                data[base + j * stride] = *l;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(SpatialGrid::new(3, 1.0, 12).is_err());
        assert!(SpatialGrid::new(2, 1.0, 8).is_err());
        assert!(SpatialGrid::new(1, -1.0, 8).is_err());
        assert!(SpatialGrid::new(1, 1.0, 8).is_ok());
    }

    #[test]
    fn index_round_trip() {
        let g = SpatialGrid::new(3, 2.0, 8).unwrap();
        for i in [0, 7, 63, 64, 511] {
            assert_eq!(g.index(g.ijk(i)), i);
        }
        assert_eq!(g.wave_vector([0, 4, 7]), [0, -4, -1]);
    }

    #[test]
    fn fft_matches_direct_sum() {
        let g = SpatialGrid::new(3, 1.0, 4).unwrap();
        let data: Vec<Complex64> = (0..g.len()).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let mut out = data.clone();
        fft_forward(&g, &mut out);
        for kb in [0, 5, 17, 63] {
            let k = g.ijk(kb);
            let mut want = Complex64::new(0.0, 0.0);
            for (xb, v) in data.iter().enumerate() {
                let x = g.ijk(xb);
                let ph: f64 = (0..3).map(|a| (k[a] * x[a]) as f64).sum::<f64>() * 2.0 * std::f64::consts::PI / 4.0;
                want += v * Complex64::from_polar(1.0, -ph);
            }
            assert!((out[kb] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn band_limit() {
        let g = SpatialGrid::new(1, 1.0, 8).unwrap();
        assert!(g.check_band_limit([3, 0, 0]).is_ok());
        assert!(matches!(g.check_band_limit([-4, 0, 0]), Err(Error::Aliasing { .. })));
        assert!(g.check_band_limit([0, 1, 0]).is_err());
    }
}
