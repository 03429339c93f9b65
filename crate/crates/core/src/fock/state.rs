use std::collections::BTreeMap;

use num_complex::Complex64;

use super::basis::{apply_ladder, Basis, BasisState};
use crate::algebra::Mode;
use crate::error::{Error, Result};

/// A single-particle wavefunction as amplitudes over modes.
pub type Orbital = Vec<(Mode, Complex64)>;

/// Amplitudes over an enumerated basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        StateVector { amplitudes }
    }

    pub fn zeros(dim: usize) -> Self {
        StateVector { amplitudes: vec![Complex64::new(0.0, 0.0); dim] }
    }

    /// Unit vector on basis index `i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.amplitudes[i] = Complex64::new(1.0, 0.0);
        v
    }

    /// `c+(o_1) c+(o_2) ... c+(o_n) |0>` with `c+(o) = sum_m o_m a+_m`,
    /// expressed in `basis`. Components outside the basis are an error.
    pub fn from_orbitals(basis: &Basis, orbitals: &[Orbital]) -> Result<StateVector> {
        let mut cur: BTreeMap<u64, Complex64> = BTreeMap::new();
        cur.insert(BasisState::VACUUM.0, Complex64::new(1.0, 0.0));
        for orbital in orbitals.iter().rev() {
            let mut next: BTreeMap<u64, Complex64> = BTreeMap::new();
            for (&s, &a) in &cur {
                for &(m, c) in orbital {
                    if let Some((sign, t)) = apply_ladder(basis.modes(), m.create(), BasisState(s))? {
                        *next.entry(t.0).or_default() += a * c * sign;
                    }
                }
            }
            cur = next;
        }
        let mut v = StateVector::zeros(basis.len());
        for (s, a) in cur {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let i = basis
                .index_of(BasisState(s))
                .ok_or_else(|| Error::InconsistentSector(format!("state {} lies outside the basis", BasisState(s))))?;
            v.amplitudes[i] = a;
        }
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> StateVector {
        let n = self.norm();
        StateVector::new(self.amplitudes.iter().map(|a| a / n).collect())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in inner product");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.amplitudes.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }

    /// Largest `|a_i - b_i|`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
