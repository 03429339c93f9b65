//! Grid dumps: CSV with one row per grid point and a binary `QGF1` format.
//!
//! | bytes  | content                                   |
//! |--------|-------------------------------------------|
//! | 4      | magic `b"QGF1"`                           |
//! | 4      | format version, `u32` (= 1)               |
//! | 1      | dimension, 1 or 3                         |
//! | 1      | components per point: 1 (density) or 8    |
//! | 8      | points per axis `G`, `u64`                |
//! | 8      | box length, `f64`                         |
//! | 8 c N  | samples, `f64`, point-major               |
//!
//! A Dirac field stores the real and imaginary parts of its four
//! components in order.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::field::{ChargeDensityField, DiracField};
use super::grid::SpatialGrid;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"QGF1";
const VERSION: u32 = 1;

/// Decoded contents of a `QGF1` file.
#[derive(Clone, Debug, PartialEq)]
pub enum GridDump {
    Density(ChargeDensityField),
    Field(DiracField),
}

fn header(out: &mut Vec<u8>, grid: &SpatialGrid, components: u8) {
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(grid.dimension);
    out.push(components);
    out.extend_from_slice(&(grid.points as u64).to_le_bytes());
    out.extend_from_slice(&grid.length.to_le_bytes());
}

impl ChargeDensityField {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(26 + 8 * self.values.len());
        header(&mut out, &self.grid, 1);
        for v in &self.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    /// `i,j,k,x,y,z,rho`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,j,k,x,y,z,rho\n");
        for (b, v) in self.values.iter().enumerate() {
            let ijk = self.grid.ijk(b);
            let x = self.grid.position(ijk);
            let _ = writeln!(s, "{},{},{},{:?},{:?},{:?},{:?}", ijk[0], ijk[1], ijk[2], x[0], x[1], x[2], v);
        }
        s
    }
}

impl DiracField {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(26 + 64 * self.values.len());
        header(&mut out, &self.grid, 8);
        for v in &self.values {
            for c in v {
                out.extend_from_slice(&c.re.to_le_bytes());
                out.extend_from_slice(&c.im.to_le_bytes());
            }
        }
        out
    }

    /// `i,j,k,re0,im0,...,re3,im3`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,j,k,re0,im0,re1,im1,re2,im2,re3,im3\n");
        for (b, v) in self.values.iter().enumerate() {
            let ijk = self.grid.ijk(b);
            let _ = write!(s, "{},{},{}", ijk[0], ijk[1], ijk[2]);
            for c in v {
                let _ = write!(s, ",{:?},{:?}", c.re, c.im);
            }
            s.push('\n');
        }
        s
    }
}

pub fn decode_grid(buf: &[u8]) -> Result<GridDump> {
    let bad = |m: &str| Error::Decode(m.to_string());
    if buf.len() < 26 {
        return Err(bad("truncated header"));
    }
    if &buf[..4] != MAGIC {
        return Err(bad("bad magic"));
    }
    let version = u32::from_le_bytes(buf[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::Decode(format!("unsupported format version {version}")));
    }
    let dimension = buf[8];
    let components = buf[9];
    let points = u64::from_le_bytes(buf[10..18].try_into().unwrap());
    let length = f64::from_le_bytes(buf[18..26].try_into().unwrap());
    let points = usize::try_from(points).map_err(|_| bad("grid size overflows usize"))?;
    let grid = SpatialGrid::new(dimension, length, points).map_err(|e| Error::Decode(e.to_string()))?;
    let per_point = match components {
        1 => 1,
        8 => 8,
        c => return Err(Error::Decode(format!("unsupported component count {c}"))),
    };
    let body = &buf[26..];
    let want = grid.len().checked_mul(8 * per_point).ok_or_else(|| bad("length overflow"))?;
    if body.len() != want {
        return Err(Error::Decode(format!("expected {want} sample bytes, found {}", body.len())));
    }
    let samples: Vec<f64> = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    if per_point == 1 {
        return Ok(GridDump::Density(ChargeDensityField { grid, values: samples }));
    }
    let values = samples
        .chunks_exact(8)
        .map(|c| {
            [
                Complex64::new(c[0], c[1]),
                Complex64::new(c[2], c[3]),
                Complex64::new(c[4], c[5]),
                Complex64::new(c[6], c[7]),
            ]
        })
        .collect();
    Ok(GridDump::Field(DiracField { grid, values }))
}
