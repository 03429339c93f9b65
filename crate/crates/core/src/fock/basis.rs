use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Ladder, Mode, Species};
use crate::error::{Error, Result};

/// Upper bound on the number of candidate occupation patterns visited while
/// enumerating a sector.
pub const ENUMERATION_LIMIT: u128 = 200_000_000;

/// Ordered modes, indexed 0..M in canonical mode order.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSet {
    modes: Vec<Mode>,
    index: HashMap<Mode, usize>,
    electron_mask: u64,
}

impl ModeSet {
    /// Sorts and deduplicates `modes`.
    pub fn new(mut modes: Vec<Mode>) -> Result<Self> {
        modes.sort();
        modes.dedup();
        if modes.len() > 64 {
            return Err(Error::TooManyModes(modes.len()));
        }
        let index = modes.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let electron_mask = modes
            .iter()
            .enumerate()
            .filter(|(_, m)| m.species == Species::Electron)
            .fold(0u64, |acc, (i, _)| acc | (1 << i));
        Ok(ModeSet { modes, index, electron_mask })
    }

    /// Both species and both spins on every listed momentum.
    pub fn from_momenta(momenta: &[[i32; 3]]) -> Result<Self> {
        let mut modes = Vec::with_capacity(4 * momenta.len());
        for species in [Species::Electron, Species::Positron] {
            for spin in 1..=2 {
                for &n in momenta {
                    modes.push(Mode::new(species, spin, n));
                }
            }
        }
        ModeSet::new(modes)
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn mode(&self, i: usize) -> Mode {
        self.modes[i]
    }

    pub fn index_of(&self, m: &Mode) -> Result<usize> {
        self.index.get(m).copied().ok_or(Error::ModeNotInSet(*m))
    }

    pub fn electron_mask(&self) -> u64 {
        self.electron_mask
    }

    pub fn positron_mask(&self) -> u64 {
        full_mask(self.len()) & !self.electron_mask
    }

    pub fn electrons(&self, s: BasisState) -> u32 {
        (s.0 & self.electron_mask).count_ones()
    }

    pub fn positrons(&self, s: BasisState) -> u32 {
        (s.0 & self.positron_mask()).count_ones()
    }

    /// Net charge in units of `e`: positrons minus electrons.
    pub fn charge(&self, s: BasisState) -> i32 {
        self.positrons(s) as i32 - self.electrons(s) as i32
    }

    pub fn total_momentum(&self, s: BasisState) -> [i32; 3] {
        let mut p = [0i32; 3];
        for i in s.occupied() {
            for (a, c) in p.iter_mut().zip(self.modes[i].momentum) {
                *a += c;
            }
        }
        p
    }

    /// The state with the given modes occupied.
    pub fn state(&self, occupied: &[Mode]) -> Result<BasisState> {
        let mut bits = 0u64;
        for m in occupied {
            bits |= 1 << self.index_of(m)?;
        }
        Ok(BasisState(bits))
    }
}

fn full_mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// Occupation pattern over a [`ModeSet`]. The represented state is the
/// product of creators for the occupied modes, applied to the vacuum in
/// ascending mode-index order (highest index acts first).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisState(pub u64);

impl BasisState {
    pub const VACUUM: BasisState = BasisState(0);

    pub fn is_occupied(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn particle_count(self) -> u32 {
        self.0.count_ones()
    }

    pub fn occupied(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    /// Applies a creator (`create = true`) or annihilator on mode `i`.
    /// Returns `None` for Pauli-blocked or empty-mode actions; otherwise the
    /// sign is `(-1)^(occupied modes below i)`.
    #[inline]
    pub fn apply(self, i: usize, create: bool) -> Option<(f64, BasisState)> {
        let bit = 1u64 << i;
        if (self.0 & bit != 0) == create {
            return None;
        }
        let below = (self.0 & (bit - 1)).count_ones();
        let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
        Some((sign, BasisState(self.0 ^ bit)))
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.occupied().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// Applies a ladder operator to a basis state.
pub fn apply_ladder(modes: &ModeSet, l: Ladder, s: BasisState) -> Result<Option<(f64, BasisState)>> {
    let i = modes.index_of(&l.mode)?;
    Ok(s.apply(i, l.is_creator()))
}

/// Conserved-quantity filters selecting a subspace of Fock space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sector {
    /// Exact total particle count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub particles: Option<u32>,
    /// Upper bound on the total particle count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_particles: Option<u32>,
    /// Net charge in units of `e` (positrons minus electrons).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charge: Option<i32>,
    /// Total lattice momentum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum: Option<[i32; 3]>,
}

impl Sector {
    pub fn all() -> Self {
        Sector::default()
    }

    pub fn with_particles(mut self, n: u32) -> Self {
        self.particles = Some(n);
        self
    }

    pub fn with_max_particles(mut self, n: u32) -> Self {
        self.max_particles = Some(n);
        self
    }

    pub fn with_charge(mut self, q: i32) -> Self {
        self.charge = Some(q);
        self
    }

    pub fn with_momentum(mut self, p: [i32; 3]) -> Self {
        self.momentum = Some(p);
        self
    }

    pub fn contains(&self, modes: &ModeSet, s: BasisState) -> bool {
        let n = s.particle_count();
        self.particles.is_none_or(|k| n == k)
            && self.max_particles.is_none_or(|k| n <= k)
            && self.charge.is_none_or(|q| modes.charge(s) == q)
            && self.momentum.is_none_or(|p| modes.total_momentum(s) == p)
    }

    fn check(&self) -> Result<()> {
        if let (Some(n), Some(max)) = (self.particles, self.max_particles) {
            if n > max {
                return Err(Error::InconsistentSector(format!(
                    "particle count {n} exceeds maximum {max}"
                )));
            }
        }
        if let Some(q) = self.charge {
            let bound = self.particles.or(self.max_particles);
            if let Some(b) = bound {
                if q.unsigned_abs() > b {
                    return Err(Error::InconsistentSector(format!(
                        "charge {q} needs more than {b} particles"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Lists every basis state of `sector`, ordered by particle count and then
/// by increasing occupation word.
pub fn enumerate_basis(modes: &ModeSet, sector: &Sector) -> Result<Vec<BasisState>> {
    sector.check()?;
    let m = modes.len() as u32;
    let (lo, hi) = match sector.particles {
        Some(n) => (n, n),
        None => (0, sector.max_particles.unwrap_or(m).min(m)),
    };
    if lo > m {
        return Ok(Vec::new());
    }
    let candidates: u128 = (lo..=hi).map(|n| binomial(m as u128, n as u128)).sum();
    if candidates > ENUMERATION_LIMIT {
        return Err(Error::SectorTooLarge { limit: ENUMERATION_LIMIT as usize });
    }
    let mut out = Vec::new();
    for n in lo..=hi {
        if n == 0 {
            if sector.contains(modes, BasisState::VACUUM) {
                out.push(BasisState::VACUUM);
            }
            continue;
        }
        // Gosper's hack over all n-subsets of m bits, in increasing order.
        let limit = 1u128 << m;
        let mut x: u128 = (1u128 << n) - 1;
        while x < limit {
            let s = BasisState(x as u64);
            if sector.contains(modes, s) {
                out.push(s);
            }
            let c = x & x.wrapping_neg();
            let r = x + c;
            x = (((r ^ x) >> 2) / c) | r;
        }
    }
    Ok(out)
}

/// An enumerated sector together with its lookup table.
#[derive(Clone, Debug)]
pub struct Basis {
    modes: Arc<ModeSet>,
    states: Vec<BasisState>,
    index: HashMap<BasisState, usize>,
}

impl Basis {
    pub fn new(modes: Arc<ModeSet>, states: Vec<BasisState>) -> Self {
        let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Basis { modes, states, index }
    }

    pub fn enumerate(modes: Arc<ModeSet>, sector: &Sector) -> Result<Self> {
        let states = enumerate_basis(&modes, sector)?;
        Ok(Basis::new(modes, states))
    }

    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    pub fn shared_modes(&self) -> Arc<ModeSet> {
        Arc::clone(&self.modes)
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> BasisState {
        self.states[i]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: BasisState) -> Option<usize> {
        self.index.get(&s).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn electrons(n: usize) -> ModeSet {
        ModeSet::new((0..n as i32).map(|i| Mode::electron(1, [i, 0, 0])).collect()).unwrap()
    }

    #[test]
    fn two_modes_one_particle() {
        let ms = electrons(2);
        let b = enumerate_basis(&ms, &Sector::all().with_particles(1)).unwrap();
        assert_eq!(b, vec![BasisState(0b01), BasisState(0b10)]);
    }

    #[test]
    fn four_modes_two_particles() {
        let ms = electrons(4);
        let b = enumerate_basis(&ms, &Sector::all().with_particles(2)).unwrap();
        assert_eq!(b.len(), 6);
        let mut dedup = b.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 6);
    }

    #[test]
    fn neutral_sector_matches_brute_force() {
        let ms = ModeSet::new(vec![
            Mode::electron(1, [0, 0, 0]),
            Mode::electron(2, [0, 0, 0]),
            Mode::positron(1, [0, 0, 0]),
            Mode::positron(2, [0, 0, 0]),
        ])
        .unwrap();
        let sector = Sector::all().with_charge(0).with_max_particles(2);
        let got = enumerate_basis(&ms, &sector).unwrap();

        // brute force over all 16 patterns
        let mut want: Vec<BasisState> = (0u64..16)
            .map(BasisState)
            .filter(|s| {
                let e = (s.0 & 0b0011).count_ones();
                let p = (s.0 & 0b1100).count_ones();
                e == p && e + p <= 2
            })
            .collect();
        want.sort_by_key(|s| (s.particle_count(), s.0));
        assert_eq!(got, want);
        assert_eq!(got.len(), 5);
        assert_eq!(got[0], BasisState::VACUUM);
    }

    #[test]
    fn full_word_enumeration() {
        let ms = ModeSet::new(
            (0..64).map(|i| Mode::electron(1 + (i % 2) as u8, [i / 2, 0, 0])).collect(),
        )
        .unwrap();
        let b = enumerate_basis(&ms, &Sector::all().with_particles(1)).unwrap();
        assert_eq!(b.len(), 64);
        assert_eq!(b[63], BasisState(1 << 63));
        let b2 = enumerate_basis(&ms, &Sector::all().with_particles(2)).unwrap();
        assert_eq!(b2.len(), 2016);
    }

    #[test]
    fn empty_and_inconsistent_sectors() {
        let ms = electrons(3);
        assert!(enumerate_basis(&ms, &Sector::all().with_particles(5)).unwrap().is_empty());
        assert!(enumerate_basis(&ms, &Sector::all().with_charge(1)).unwrap().is_empty());
        assert!(matches!(
            enumerate_basis(&ms, &Sector::all().with_max_particles(1).with_charge(-2)),
            Err(Error::InconsistentSector(_))
        ));
    }

    #[test]
    fn ladder_action_signs() {
        let ms = electrons(2);
        let m0 = ms.mode(0);
        let m1 = ms.mode(1);
        assert_eq!(
            apply_ladder(&ms, m1.annihilate(), BasisState(0b11)).unwrap(),
            Some((-1.0, BasisState(0b01)))
        );
        assert_eq!(apply_ladder(&ms, m0.annihilate(), BasisState(0b10)).unwrap(), None);
        assert_eq!(apply_ladder(&ms, m0.create(), BasisState(0b01)).unwrap(), None);
        assert!(apply_ladder(&ms, Mode::positron(1, [0, 0, 0]).create(), BasisState(0)).is_err());
    }

    #[test]
    fn too_many_modes_rejected() {
        let modes = (0..65).map(|i| Mode::electron(1, [i, 0, 0])).collect();
        assert!(matches!(ModeSet::new(modes), Err(Error::TooManyModes(65))));
    }
}
