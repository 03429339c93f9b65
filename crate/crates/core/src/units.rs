//! Conversion from the internal units (`hbar = c = m_e = 1`) to Gaussian cgs.
//!
//! With those three set to one the remaining scales are fixed: energies in
//! units of `m_e c^2`, lengths in reduced Compton wavelengths `hbar / (m_e c)`,
//! times in `hbar / (m_e c^2)`, and charges in `sqrt(hbar c)`, so that the
//! internal `e^2` is the fine-structure constant.

use serde::Serialize;

/// CODATA 2018 values in Gaussian cgs.
pub const HBAR_ERG_S: f64 = 1.054571817e-27;
pub const C_CM_PER_S: f64 = 2.99792458e10;
pub const ELECTRON_MASS_G: f64 = 9.1093837015e-28;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CgsScales {
    pub erg: f64,
    pub cm: f64,
    pub s: f64,
    pub statcoulomb: f64,
    pub gram: f64,
}

/// cgs value of one internal unit of each quantity.
pub fn cgs_scales() -> CgsScales {
    let erg = ELECTRON_MASS_G * C_CM_PER_S * C_CM_PER_S;
    CgsScales {
        erg,
        cm: HBAR_ERG_S / (ELECTRON_MASS_G * C_CM_PER_S),
        s: HBAR_ERG_S / erg,
        statcoulomb: (HBAR_ERG_S * C_CM_PER_S).sqrt(),
        gram: ELECTRON_MASS_G,
    }
}

pub fn energy_to_erg(e: f64) -> f64 {
    e * cgs_scales().erg
}

pub fn length_to_cm(l: f64) -> f64 {
    l * cgs_scales().cm
}

pub fn time_to_s(t: f64) -> f64 {
    t * cgs_scales().s
}

pub fn charge_to_statcoulomb(q: f64) -> f64 {
    q * cgs_scales().statcoulomb
}
