//! Free Dirac plane-wave spinors in the Dirac representation with spin
//! quantized along the fixed z axis.
//!
//! `u^s(p) = ( sqrt(E + mc^2) xi_s , c (sigma.p) xi_s / sqrt(E + mc^2) )`
//! `v^s(p) = ( c (sigma.p) xi_s / sqrt(E + mc^2) , sqrt(E + mc^2) xi_s )`
//!
//! with `xi_1 = (1, 0)`, `xi_2 = (0, 1)`. Both are normalized to `2E`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::config::ModelConfig;
use crate::error::{Error, Result};

pub type Spinor = [Complex64; 4];

/// `E(p) = sqrt(m^2 c^4 + |p|^2 c^2)` at lattice vector `n`.
pub fn dispersion(cfg: &ModelConfig, n: [i32; 3]) -> f64 {
    let p = cfg.momentum(n);
    let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    let mc2 = cfg.mass * cfg.c * cfg.c;
    (mc2 * mc2 + p2 * cfg.c * cfg.c).sqrt()
}

#[derive(Clone, Debug)]
pub struct SpinorEntry {
    pub energy: f64,
    /// Indexed by spin 1, 2 at positions 0, 1.
    pub u: [Spinor; 2],
    pub v: [Spinor; 2],
}

/// `u^s` and `v^s` at lattice vector `n`, which need not lie inside the
/// configured cutoff.
pub fn plane_wave(cfg: &ModelConfig, n: [i32; 3]) -> Result<SpinorEntry> {
    let mc2 = cfg.mass * cfg.c * cfg.c;
    let energy = dispersion(cfg, n);
    if energy <= 0.0 {
        return Err(Error::Config(format!("massless zero mode at {n:?} has no spinor")));
    }
    let p = cfg.momentum(n);
    let root = (energy + mc2).sqrt();
    let mut u = [[Complex64::new(0.0, 0.0); 4]; 2];
    let mut v = u;
    for s in 1..=2u8 {
        let x = xi(s);
        let sp = sigma_dot(p, x);
        let k = (s - 1) as usize;
        u[k] = [x[0] * root, x[1] * root, sp[0] * cfg.c / root, sp[1] * cfg.c / root];
        v[k] = [sp[0] * cfg.c / root, sp[1] * cfg.c / root, x[0] * root, x[1] * root];
    }
    Ok(SpinorEntry { energy, u, v })
}

/// Spinors for every lattice momentum of a configuration.
#[derive(Clone, Debug)]
pub struct SpinorTable {
    entries: BTreeMap<[i32; 3], SpinorEntry>,
}

fn sigma_dot(p: [f64; 3], xi: [Complex64; 2]) -> [Complex64; 2] {
    let i = Complex64::i();
    let (px, py, pz) = (p[0], p[1], p[2]);
    [
        xi[0] * pz + xi[1] * (px - i * py),
        xi[0] * (px + i * py) - xi[1] * pz,
    ]
}

fn xi(spin: u8) -> [Complex64; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if spin == 1 { [one, zero] } else { [zero, one] }
}

impl SpinorTable {
    pub fn new(cfg: &ModelConfig) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for n in cfg.lattice() {
            entries.insert(n, plane_wave(cfg, n)?);
        }
        Ok(SpinorTable { entries })
    }

    pub fn entry(&self, n: [i32; 3]) -> Option<&SpinorEntry> {
        self.entries.get(&n)
    }

    pub fn energy(&self, n: [i32; 3]) -> f64 {
        self.entries[&n].energy
    }

    pub fn u(&self, spin: u8, n: [i32; 3]) -> Spinor {
        self.entries[&n].u[(spin - 1) as usize]
    }

    pub fn v(&self, spin: u8, n: [i32; 3]) -> Spinor {
        self.entries[&n].v[(spin - 1) as usize]
    }

    /// `u / sqrt(2E)`, the weight that enters the field expansion.
    pub fn u_tilde(&self, spin: u8, n: [i32; 3]) -> Spinor {
        let e = &self.entries[&n];
        let s = 1.0 / (2.0 * e.energy).sqrt();
        e.u[(spin - 1) as usize].map(|x| x * s)
    }

    pub fn v_tilde(&self, spin: u8, n: [i32; 3]) -> Spinor {
        let e = &self.entries[&n];
        let s = 1.0 / (2.0 * e.energy).sqrt();
        e.v[(spin - 1) as usize].map(|x| x * s)
    }

    pub fn momenta(&self) -> impl Iterator<Item = [i32; 3]> + '_ {
        self.entries.keys().copied()
    }
}

pub fn build_spinors(cfg: &ModelConfig) -> Result<SpinorTable> {
    cfg.validate()?;
    SpinorTable::new(cfg)
}

/// `a^dagger b`.
pub fn inner(a: &Spinor, b: &Spinor) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// The Dirac one-body Hamiltonian `c alpha.p + beta m c^2` as a 4x4 matrix.
pub fn dirac_matrix(cfg: &ModelConfig, n: [i32; 3]) -> [[Complex64; 4]; 4] {
    let p = cfg.momentum(n);
    let mc2 = cfg.mass * cfg.c * cfg.c;
    let mut h = [[Complex64::new(0.0, 0.0); 4]; 4];
    for col in 0..2 {
        let mut e = [Complex64::new(0.0, 0.0); 2];
        e[col] = Complex64::new(1.0, 0.0);
        let sp = sigma_dot(p, e);
        for row in 0..2 {
            h[row][col + 2] = sp[row] * cfg.c;
            h[row + 2][col] = sp[row] * cfg.c;
        }
    }
    for d in 0..4 {
        h[d][d] = Complex64::new(if d < 2 { mc2 } else { -mc2 }, 0.0);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(h: &[[Complex64; 4]; 4], x: &Spinor) -> Spinor {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (o, row) in out.iter_mut().zip(h) {
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        out
    }

    #[test]
    fn dispersion_examples() {
        let cfg = ModelConfig::default();
        assert_eq!(dispersion(&cfg, [0, 0, 0]), 1.0);
        assert_eq!(dispersion(&cfg, [1, 0, 0]), dispersion(&cfg, [-1, 0, 0]));
        let massless = ModelConfig { mass: 0.0, box_length: 3.0, ..ModelConfig::default() };
        let want = 5.0 * 2.0 * std::f64::consts::PI / 3.0;
        assert!((dispersion(&massless, [3, 4, 0]) - want).abs() < 1e-12 * want);
        assert!(dispersion(&cfg, [1, 1, 0]) > dispersion(&cfg, [1, 0, 0]));
    }

    #[test]
    fn rest_spinors() {
        let cfg = ModelConfig::default();
        let t = build_spinors(&cfg).unwrap();
        let r = 2f64.sqrt();
        let u1 = t.u(1, [0, 0, 0]);
        assert!((u1[0] - Complex64::new(r, 0.0)).norm() < 1e-15);
        assert!(u1[1].norm() == 0.0 && u1[2].norm() == 0.0 && u1[3].norm() == 0.0);
    }

    #[test]
    fn normalization_and_orthogonality() {
        let cfg = ModelConfig { n_max: 2, max_norm_sq: Some(3), box_length: 4.1, ..Default::default() };
        let t = build_spinors(&cfg).unwrap();
        for n in t.momenta() {
            let m = [-n[0], -n[1], -n[2]];
            let e = t.energy(n);
            for s in 1..=2 {
                for r in 1..=2 {
                    let d = if s == r { 2.0 * e } else { 0.0 };
                    assert!((inner(&t.u(s, n), &t.u(r, n)) - d).norm() < 1e-12);
                    assert!((inner(&t.v(s, n), &t.v(r, n)) - d).norm() < 1e-12);
                    assert!(inner(&t.u(s, n), &t.v(r, m)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn spinors_solve_the_dirac_equation() {
        let cfg = ModelConfig { box_length: 2.5, ..Default::default() };
        let t = build_spinors(&cfg).unwrap();
        for n in t.momenta() {
            let e = t.energy(n);
            let h = dirac_matrix(&cfg, n);
            let m = [-n[0], -n[1], -n[2]];
            let hm = dirac_matrix(&cfg, m);
            for s in 1..=2 {
                let u = t.u(s, n);
                let hu = apply(&h, &u);
                let v = t.v(s, n);
                // v(p) multiplies e^{-ipx}, so it is a negative-energy solution at -p
                let hv = apply(&hm, &v);
                for i in 0..4 {
                    assert!((hu[i] - u[i] * e).norm() < 1e-12);
                    assert!((hv[i] + v[i] * e).norm() < 1e-12);
                }
            }
        }
    }
}
