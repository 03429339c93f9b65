use std::fmt;

use serde::{Deserialize, Serialize};

/// Particle species of a Dirac-field mode. Electrons order before positrons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Species {
    Electron,
    Positron,
}

/// One discretized single-particle degree of freedom.
///
/// The derived ordering (species, then spin, then lexicographic momentum)
/// is the canonical mode order used for every sign convention in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mode {
    pub species: Species,
    /// Spin index, 1 or 2.
    pub spin: u8,
    /// Integer lattice vector; physical momentum is `(2 pi hbar / L) * n`.
    pub momentum: [i32; 3],
}

impl Mode {
    pub const fn new(species: Species, spin: u8, momentum: [i32; 3]) -> Self {
        Mode { species, spin, momentum }
    }

    pub const fn electron(spin: u8, momentum: [i32; 3]) -> Self {
        Mode::new(Species::Electron, spin, momentum)
    }

    pub const fn positron(spin: u8, momentum: [i32; 3]) -> Self {
        Mode::new(Species::Positron, spin, momentum)
    }

    pub fn within_cutoff(&self, n_max: i32) -> bool {
        self.momentum.iter().all(|c| c.abs() <= n_max)
    }

    pub fn create(self) -> Ladder {
        Ladder { mode: self, kind: LadderKind::Create }
    }

    pub fn annihilate(self) -> Ladder {
        Ladder { mode: self, kind: LadderKind::Annihilate }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.species {
            Species::Electron => 'b',
            Species::Positron => 'd',
        };
        let [x, y, z] = self.momentum;
        write!(f, "{tag}({},{x},{y},{z})", self.spin)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LadderKind {
    Create,
    Annihilate,
}

/// A creation or annihilation operator on a single mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ladder {
    pub mode: Mode,
    pub kind: LadderKind,
}

impl Ladder {
    pub fn is_creator(&self) -> bool {
        self.kind == LadderKind::Create
    }

    pub fn is_annihilator(&self) -> bool {
        self.kind == LadderKind::Annihilate
    }

    /// The Hermitian conjugate: same mode, opposite kind.
    pub fn dagger(self) -> Ladder {
        let kind = match self.kind {
            LadderKind::Create => LadderKind::Annihilate,
            LadderKind::Annihilate => LadderKind::Create,
        };
        Ladder { mode: self.mode, kind }
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.mode.species {
            Species::Electron => 'b',
            Species::Positron => 'd',
        };
        let sign = if self.is_creator() { '+' } else { '-' };
        let [x, y, z] = self.mode.momentum;
        write!(f, "{tag}{sign}({},{x},{y},{z})", self.mode.spin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_species_spin_momentum() {
        let a = Mode::electron(2, [-1, 0, 0]);
        let b = Mode::positron(1, [-1, -1, -1]);
        let c = Mode::electron(1, [1, 1, 1]);
        let d = Mode::electron(1, [1, 1, 0]);
        let mut v = vec![a, b, c, d];
        v.sort();
        assert_eq!(v, vec![d, c, a, b]);
    }

    #[test]
    fn dagger_flips_kind() {
        let m = Mode::electron(1, [0, 0, 0]);
        assert_eq!(m.create().dagger(), m.annihilate());
        assert_eq!(m.annihilate().dagger().dagger(), m.annihilate());
    }

    #[test]
    fn display_uses_operator_syntax() {
        assert_eq!(Mode::positron(2, [1, -1, 0]).create().to_string(), "d+(2,1,-1,0)");
        assert_eq!(Mode::electron(1, [0, 0, 3]).annihilate().to_string(), "b-(1,0,0,3)");
    }
}
