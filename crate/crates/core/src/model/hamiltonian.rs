//! Hamiltonian terms in box-mode form.
//!
//! The field is expanded as `psi(x) = V^{-1/2} sum_k phi_k e^{ikx}` with
//!
//! `phi_k = sum_s [ b_{k,s} u~_s(k) + d+_{-k,s} v~_s(-k) ]`,  `u~ = u / sqrt(2E)`,
//!
//! so the Coulomb energy `(1/2) int int rho(x) rho(y) / |x - y|` becomes
//! `(1/2V) sum_q V(q) n_{-q} n_q` with `n_q = sum_k phi+_k phi_{k+q}`. Each
//! quartic is enumerated over the four field constituents of the two
//! bilinears and tagged with which of them come from `psi+` (the `b` part)
//! or `psi-` (the `d+` part).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_complex::Complex64;

use super::config::ModelConfig;
use super::kernel::CoulombKernel;
use super::spinor::{inner, Spinor, SpinorTable};
use crate::algebra::{normal_order_factors, Ladder, Mode, OperatorExpr, Species, Term};
use crate::error::{Error, Result};
use crate::fock::{ModeSet, Sector};

/// Which half of the field a constituent belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    /// `psi+`: electron annihilator (its adjoint creates an electron).
    Plus,
    /// `psi-`: positron creator.
    Minus,
}

use Part::{Minus, Plus};

/// Spinor overlaps below this are rounding residue of exact zeros
/// (orthogonal spins, `u(k)+ v(-k)`); the weights themselves have unit norm.
const OVERLAP_FLOOR: f64 = 1e-14;

#[derive(Clone, Copy, Debug)]
struct Bilinear {
    left: Ladder,
    right: Ladder,
    parts: [Part; 2],
    coeff: Complex64,
}

/// A validated configuration with its lattice, modes, spinors and kernel.
#[derive(Clone, Debug)]
pub struct Model {
    cfg: ModelConfig,
    lattice: Vec<[i32; 3]>,
    lattice_set: BTreeSet<[i32; 3]>,
    modes: Arc<ModeSet>,
    spinors: SpinorTable,
    kernel: CoulombKernel,
}

fn add(a: [i32; 3], b: [i32; 3]) -> [i32; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn neg(a: [i32; 3]) -> [i32; 3] {
    [-a[0], -a[1], -a[2]]
}

impl Model {
    pub fn new(cfg: &ModelConfig) -> Result<Self> {
        cfg.validate()?;
        let lattice = cfg.lattice();
        let modes = Arc::new(ModeSet::from_momenta(&lattice)?);
        Ok(Model {
            cfg: cfg.clone(),
            lattice_set: lattice.iter().copied().collect(),
            lattice,
            modes,
            spinors: SpinorTable::new(cfg)?,
            kernel: CoulombKernel::new(cfg)?,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.cfg
    }

    pub fn lattice(&self) -> &[[i32; 3]] {
        &self.lattice
    }

    pub fn modes(&self) -> Arc<ModeSet> {
        self.modes.clone()
    }

    pub fn spinors(&self) -> &SpinorTable {
        &self.spinors
    }

    pub fn kernel(&self) -> &CoulombKernel {
        &self.kernel
    }

    /// Sector with the configured particle cap.
    pub fn sector(&self) -> Sector {
        Sector::all().with_max_particles(self.cfg.max_particles)
    }

    /// Constituents of `phi_k`: ladder, weight spinor and part.
    fn constituents(&self, k: [i32; 3]) -> Vec<(Ladder, Spinor, Part)> {
        let mut out = Vec::with_capacity(4);
        for s in 1..=2u8 {
            out.push((Mode::electron(s, k).annihilate(), self.spinors.u_tilde(s, k), Plus));
        }
        let mk = neg(k);
        for s in 1..=2u8 {
            out.push((Mode::positron(s, mk).create(), self.spinors.v_tilde(s, mk), Minus));
        }
        out
    }

    /// Terms of `phi+_{k1} phi_{k2}`, in constituent order.
    fn bilinear(&self, k1: [i32; 3], k2: [i32; 3]) -> Vec<Bilinear> {
        let a = self.constituents(k1);
        let b = self.constituents(k2);
        let mut out = Vec::with_capacity(16);
        for (la, wa, pa) in &a {
            for (lb, wb, pb) in &b {
                let coeff = inner(wa, wb);
                if coeff.norm() > OVERLAP_FLOOR {
                    out.push(Bilinear { left: la.dagger(), right: *lb, parts: [*pa, *pb], coeff });
                }
            }
        }
        out
    }

    /// Pairs `(k, k + q)` inside the lattice.
    fn pairs(&self, q: [i32; 3]) -> Vec<([i32; 3], [i32; 3])> {
        self.lattice
            .iter()
            .filter_map(|&k| {
                let kq = add(k, q);
                self.lattice_set.contains(&kq).then_some((k, kq))
            })
            .collect()
    }

    /// `n_q` as a list of bilinears.
    fn density(&self, q: [i32; 3]) -> Vec<Bilinear> {
        self.pairs(q).into_iter().flat_map(|(k, kq)| self.bilinear(k, kq)).collect()
    }

    /// Enumerates `(1/2V) sum_q V(q) n_{-q} n_q` constituent by constituent.
    ///
    /// `select` sees the parts of `[L1, L2, L3, L4]`, the two x-side then the
    /// two y-side ladders, and returns the order in which to write them and
    /// a scale factor, or `None` to skip the combination. With `normal` the
    /// written product is then normal ordered.
    fn quartic(&self, select: impl Fn([Part; 4]) -> Option<([usize; 4], f64)>, normal: bool) -> OperatorExpr {
        let vol = self.cfg.volume();
        let mut terms = Vec::new();
        for (q, vq) in self.kernel.iter() {
            let pref = vq / (2.0 * vol);
            let x = self.density(neg(q));
            let y = self.density(q);
            for bx in &x {
                for by in &y {
                    let parts = [bx.parts[0], bx.parts[1], by.parts[0], by.parts[1]];
                    let Some((order, scale)) = select(parts) else { continue };
                    let ladders = [bx.left, bx.right, by.left, by.right];
                    let factors: Vec<Ladder> = order.iter().map(|&i| ladders[i]).collect();
                    let coeff = bx.coeff * by.coeff * (pref * scale);
                    let (coeff, factors) = if normal { normal_order_factors(coeff, &factors) } else { (coeff, factors) };
                    terms.push(Term::new(coeff, factors));
                }
            }
        }
        OperatorExpr::from_terms(terms)
    }

    /// `sum_{k,s} E(k) (b+ b + d+ d)`.
    pub fn free_hamiltonian(&self) -> OperatorExpr {
        let mut terms = Vec::new();
        for m in self.modes.modes() {
            let e = self.spinors.energy(m.momentum);
            terms.push(Term::new(Complex64::new(e, 0.0), vec![m.create(), m.annihilate()]));
        }
        OperatorExpr::from_terms(terms)
    }

    /// The fully normal-ordered Coulomb term, assembled from its pieces so
    /// that the decomposition holds term by term in floating point.
    pub fn coulomb_full(&self) -> OperatorExpr {
        self.coulomb_pieces().sum()
    }

    /// The same operator normal ordered in one pass over every constituent
    /// combination, without the piece bookkeeping. Agrees with
    /// [`Model::coulomb_full`] up to the rounding of reassociated sums.
    pub fn coulomb_full_direct(&self) -> OperatorExpr {
        self.quartic(|_| Some(([0, 1, 2, 3], 1.0)), true)
    }

    /// `(1/2V) sum_q V(q) :n_{-q}: :n_q:`, each density normal ordered on
    /// its own.
    pub fn coulomb_partial(&self) -> OperatorExpr {
        let vol = self.cfg.volume();
        let normal_density = |q: [i32; 3]| {
            OperatorExpr::from_terms(self.density(q).into_iter().map(|b| {
                let (c, f) = normal_order_factors(b.coeff, &[b.left, b.right]);
                Term::new(c, f)
            }))
        };
        let mut out = OperatorExpr::zero();
        for (q, vq) in self.kernel.iter() {
            let product = normal_density(neg(q)).multiply(&normal_density(q));
            out += &(&product * (vq / (2.0 * vol)));
        }
        out
    }

    /// The number-conserving pieces with their own index structure, and the
    /// number-changing remainder, all normal ordered.
    pub fn coulomb_pieces(&self) -> CoulombPieces {
        let conserving = |p: [Part; 4]| {
            let created_electrons = (p[0] == Plus) as u8 + (p[2] == Plus) as u8;
            let removed_electrons = (p[1] == Plus) as u8 + (p[3] == Plus) as u8;
            created_electrons == removed_electrons
        };
        CoulombPieces {
            // -(1/2) psi+† psi+† psi+ psi+
            ee: self.quartic(|p| (p == [Plus; 4]).then_some(([0, 2, 1, 3], -1.0)), false),
            // psi-(x) psi+†(y) psi-†(x) psi+(y), both orientations of the pair
            ep: self.quartic(|p| (p == [Minus, Minus, Plus, Plus]).then_some(([1, 2, 0, 3], 2.0)), false),
            // -(1/2) psi-(x) psi-(y) psi-†(x) psi-†(y)
            pp: self.quartic(|p| (p == [Minus; 4]).then_some(([1, 3, 0, 2], -1.0)), false),
            // psi+†(x) psi-(x) psi-†(y) psi+(y): pair annihilation and
            // re-creation at the other momentum
            ep_annihilation: self
                .quartic(|p| (p == [Plus, Minus, Minus, Plus]).then_some(([0, 1, 2, 3], 2.0)), false),
            number_changing: self.quartic(|p| (!conserving(p)).then_some(([0, 1, 2, 3], 1.0)), true),
        }
    }

    /// `(1/2V) sum_q V(q) n+_{-q} n+_q` with `n+` the electron part of the
    /// density, products left exactly as written.
    pub fn bad_electron_term(&self) -> OperatorExpr {
        self.quartic(|p| (p == [Plus; 4]).then_some(([0, 1, 2, 3], 1.0)), false)
    }

    /// `int rho(x) phi(x) = -e sum_q phi_q n_{-q}`, keeping the
    /// number-conserving (no-pair) part of the normal-ordered density.
    pub fn external_potential_term(&self, phi: &ExternalPotential) -> Result<OperatorExpr> {
        phi.check_real()?;
        let mut terms = Vec::new();
        for (&q, &value) in &phi.values {
            if value == Complex64::new(0.0, 0.0) {
                continue;
            }
            for b in self.density(neg(q)) {
                if b.parts[0] != b.parts[1] {
                    continue;
                }
                let (c, f) = normal_order_factors(b.coeff * value * (-self.cfg.charge), &[b.left, b.right]);
                terms.push(Term::new(c, f));
            }
        }
        Ok(OperatorExpr::from_terms(terms))
    }

    /// `Q = -e (N_electrons - N_positrons)`.
    pub fn charge_operator(&self) -> OperatorExpr {
        let e = self.cfg.charge;
        OperatorExpr::from_terms(self.modes.modes().iter().map(|m| {
            let sign = if m.species == Species::Electron { -e } else { e };
            Term::new(Complex64::new(sign, 0.0), vec![m.create(), m.annihilate()])
        }))
    }
}

/// The pieces of the fully normal-ordered Coulomb term.
#[derive(Clone, Debug)]
pub struct CoulombPieces {
    pub ee: OperatorExpr,
    pub ep: OperatorExpr,
    pub pp: OperatorExpr,
    pub ep_annihilation: OperatorExpr,
    pub number_changing: OperatorExpr,
}

impl CoulombPieces {
    pub fn sum(&self) -> OperatorExpr {
        let mut s = self.ee.clone();
        s += &self.ep;
        s += &self.pp;
        s += &self.ep_annihilation;
        s += &self.number_changing;
        s
    }

    pub fn named(&self) -> [(&'static str, &OperatorExpr); 5] {
        [
            ("ee", &self.ee),
            ("ep", &self.ep),
            ("pp", &self.pp),
            ("ep_annihilation", &self.ep_annihilation),
            ("number_changing", &self.number_changing),
        ]
    }
}

/// Fourier components `phi(x) = sum_q phi_q e^{iqx}` of a static potential.
#[derive(Clone, Debug, Default)]
pub struct ExternalPotential {
    pub values: BTreeMap<[i32; 3], Complex64>,
}

impl ExternalPotential {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: f64) -> Self {
        let mut values = BTreeMap::new();
        values.insert([0, 0, 0], Complex64::new(value, 0.0));
        ExternalPotential { values }
    }

    /// Point charge `+Z e` at the origin, periodized with its `q = 0`
    /// component removed.
    pub fn nucleus(cfg: &ModelConfig, z: f64) -> Result<Self> {
        cfg.validate()?;
        let lattice = cfg.lattice();
        let dk = cfg.dk();
        let mut values = BTreeMap::new();
        for a in &lattice {
            for b in &lattice {
                let q = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
                if q == [0, 0, 0] || values.contains_key(&q) {
                    continue;
                }
                let k = [dk * q[0] as f64, dk * q[1] as f64, dk * q[2] as f64];
                let bare = super::kernel::bare_kernel(cfg.dimension, k, cfg.softening_length());
                values.insert(q, Complex64::new(z * cfg.charge * bare / cfg.volume(), 0.0));
            }
        }
        Ok(ExternalPotential { values })
    }

    /// Real potentials satisfy `phi_{-q} = conj(phi_q)`.
    pub fn check_real(&self) -> Result<()> {
        let scale = self.values.values().map(|v| v.norm()).fold(0.0, f64::max);
        for (q, v) in &self.values {
            let partner = self.values.get(&neg(*q)).copied().unwrap_or_default();
            let defect = (partner - v.conj()).norm();
            if !(defect <= 1e-12 * scale.max(1.0)) {
                return Err(Error::ComplexPotential(defect));
            }
        }
        Ok(())
    }
}

pub fn free_hamiltonian(cfg: &ModelConfig) -> Result<OperatorExpr> {
    Ok(Model::new(cfg)?.free_hamiltonian())
}

pub fn coulomb_full(cfg: &ModelConfig) -> Result<OperatorExpr> {
    Ok(Model::new(cfg)?.coulomb_full())
}

pub fn coulomb_partial(cfg: &ModelConfig) -> Result<OperatorExpr> {
    Ok(Model::new(cfg)?.coulomb_partial())
}

pub fn coulomb_pieces(cfg: &ModelConfig) -> Result<CoulombPieces> {
    Ok(Model::new(cfg)?.coulomb_pieces())
}

pub fn bad_electron_term(cfg: &ModelConfig) -> Result<OperatorExpr> {
    Ok(Model::new(cfg)?.bad_electron_term())
}

pub fn external_potential_term(cfg: &ModelConfig, phi: &ExternalPotential) -> Result<OperatorExpr> {
    Model::new(cfg)?.external_potential_term(phi)
}
