//! Wavepackets and position-space diagnostics of one-particle states.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::hamiltonian::Model;
use super::spinor::inner;
use crate::algebra::{Mode, Species};
use crate::error::{Error, Result};
use crate::fock::{Basis, Orbital, StateVector};

/// Normalized Gaussian packet `c(k) ~ exp(-|k - k0|^2 sigma^2 / 2 - i k.x0)`
/// over the lattice, for one species and spin.
pub fn gaussian_packet(
    model: &Model,
    species: Species,
    spin: u8,
    center: [f64; 3],
    sigma: f64,
    k0: [f64; 3],
) -> Orbital {
    let dk = model.config().dk();
    let mut out: Orbital = model
        .lattice()
        .iter()
        .map(|&n| {
            let k = [dk * n[0] as f64, dk * n[1] as f64, dk * n[2] as f64];
            let d2: f64 = (0..3).map(|i| (k[i] - k0[i]).powi(2)).sum();
            let phase: f64 = (0..3).map(|i| k[i] * center[i]).sum();
            (Mode::new(species, spin, n), Complex64::from_polar((-0.5 * d2 * sigma * sigma).exp(), -phase))
        })
        .collect();
    let norm = out.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt();
    out.iter_mut().for_each(|(_, c)| *c /= norm);
    out
}

/// Mode amplitudes of a state whose support is entirely one-particle.
pub fn one_particle_amplitudes(basis: &Basis, state: &StateVector) -> Result<Orbital> {
    if state.dim() != basis.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), found: state.dim() });
    }
    let mut out = Vec::new();
    for (s, &a) in basis.states().iter().zip(state.amplitudes()) {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        if s.particle_count() != 1 {
            return Err(Error::InconsistentSector(format!("state {s} is not a one-particle state")));
        }
        let i = s.occupied().next().expect("one particle");
        out.push((basis.modes().mode(i), a));
    }
    Ok(out)
}

/// `sum_j |x_j|^p e^{i m dk x_j}` over the grid `x_j = -L/2 + (j + 1/2) L / G`.
fn axis_moment(l: f64, g: usize, m: i32, p: i32) -> Complex64 {
    let h = l / g as f64;
    let dk = 2.0 * std::f64::consts::PI / l;
    (0..g)
        .map(|j| {
            let x = -0.5 * l + (j as f64 + 0.5) * h;
            Complex64::from_polar(x.powi(p), m as f64 * dk * x)
        })
        .sum()
}

/// Second moment `<|x|^2>` of the one-particle charge density about the
/// origin, sampled on `g` points per axis of the box `[-L/2, L/2)^d`.
///
/// The electron density is
/// `n(x) = (1/V) sum_{a,b} c_a* c_b u~_a+ u~_b e^{i (k_b - k_a) x}`
/// and positron modes give the positron number density through `v~`. It is
/// accumulated per momentum difference so the grid sums factor by axis.
pub fn position_spread(model: &Model, amplitudes: &Orbital, g: usize) -> f64 {
    let cfg = model.config();
    let t = model.spinors();
    let weight = |m: &Mode| match m.species {
        Species::Electron => t.u_tilde(m.spin, m.momentum),
        Species::Positron => t.v_tilde(m.spin, m.momentum),
    };
    let mut by_shift: BTreeMap<[i32; 3], Complex64> = BTreeMap::new();
    for (ma, ca) in amplitudes {
        for (mb, cb) in amplitudes {
            if ma.species != mb.species {
                continue;
            }
            let (wa, wb) = (weight(ma), weight(mb));
            let shift = [0, 1, 2].map(|i| mb.momentum[i] - ma.momentum[i]);
            // the positron density comes from -d+ d after normal ordering,
            // which transposes the spinor overlap; the overall sign cancels
            let overlap = match ma.species {
                Species::Electron => inner(&wa, &wb),
                Species::Positron => inner(&wb, &wa),
            };
            *by_shift.entry(shift).or_default() += ca.conj() * cb * overlap;
        }
    }
    let l = cfg.box_length;
    let d = cfg.dimension as usize;
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = Complex64::new(0.0, 0.0);
    for (shift, w) in by_shift {
        let m0: Vec<Complex64> = (0..d).map(|i| axis_moment(l, g, shift[i], 0)).collect();
        let m2: Vec<Complex64> = (0..d).map(|i| axis_moment(l, g, shift[i], 2)).collect();
        den += w * m0.iter().product::<Complex64>();
        for i in 0..d {
            let mut p = m2[i];
            for (j, z) in m0.iter().enumerate() {
                if j != i {
                    p *= z;
                }
            }
            num += w * p;
        }
    }
    num.re / den.re
}
