use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use super::mode::{Ladder, Mode};

/// A complex coefficient times an ordered product of ladder operators.
/// An empty factor list is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub factors: Vec<Ladder>,
}

impl Term {
    pub fn new(coeff: Complex64, factors: Vec<Ladder>) -> Self {
        Term { coeff, factors }
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    /// True when every creator stands left of every annihilator.
    pub fn is_normal_ordered(&self) -> bool {
        is_normal_ordered(&self.factors)
    }

    pub fn adjoint(&self) -> Term {
        Term {
            coeff: self.coeff.conj(),
            factors: self.factors.iter().rev().map(|l| l.dagger()).collect(),
        }
    }

    /// Vanishes identically: the same ladder appears twice with no
    /// conjugate partner on the same mode standing between the copies.
    pub fn is_nilpotent(&self) -> bool {
        has_unshielded_repeat(&self.factors)
    }
}

fn is_normal_ordered(factors: &[Ladder]) -> bool {
    let first_annihilator = factors.iter().position(|l| l.is_annihilator());
    match first_annihilator {
        None => true,
        Some(i) => factors[i..].iter().all(|l| l.is_annihilator()),
    }
}

fn has_unshielded_repeat(factors: &[Ladder]) -> bool {
    for i in 0..factors.len() {
        for j in (i + 1)..factors.len() {
            if factors[j] == factors[i] {
                let partner = factors[i].dagger();
                if !factors[i + 1..j].contains(&partner) {
                    return true;
                }
                // The next copy of factors[i] is the only one that can pair
                // with it; later copies are checked from j onwards.
                break;
            }
        }
    }
    false
}

/// Sort `items` with adjacent transpositions and report the permutation
/// parity (`true` means odd).
fn sort_with_parity<T: Ord + Copy>(items: &mut [T], descending: bool) -> bool {
    let mut odd = false;
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 {
            let out_of_order = if descending {
                items[j - 1] < items[j]
            } else {
                items[j - 1] > items[j]
            };
            if !out_of_order {
                break;
            }
            items.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    odd
}

/// Brings a single term to canonical factor order. Returns `None` when the
/// term vanishes by nilpotency.
fn canonical_term(coeff: Complex64, mut factors: Vec<Ladder>) -> Option<(Complex64, Vec<Ladder>)> {
    if has_unshielded_repeat(&factors) {
        return None;
    }
    if !is_normal_ordered(&factors) {
        return Some((coeff, factors));
    }
    let split = factors.iter().take_while(|l| l.is_creator()).count();
    let (creators, annihilators) = factors.split_at_mut(split);
    let odd = sort_with_parity(creators, false) ^ sort_with_parity(annihilators, true);
    Some((if odd { -coeff } else { coeff }, factors))
}

/// A complex-weighted sum of ladder-operator products.
///
/// Values produced by the public constructors and operations are kept in
/// canonical form: normal-ordered terms have creators ascending and
/// annihilators descending in mode order, like terms are merged and
/// exact-zero terms are removed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OperatorExpr {
    terms: Vec<Term>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        OperatorExpr { terms: Vec::new() }
    }

    pub fn identity(coeff: Complex64) -> Self {
        OperatorExpr::from_terms(vec![Term::new(coeff, Vec::new())])
    }

    pub fn ladder(l: Ladder) -> Self {
        OperatorExpr::from_terms(vec![Term::new(Complex64::new(1.0, 0.0), vec![l])])
    }

    pub fn product(coeff: Complex64, factors: Vec<Ladder>) -> Self {
        OperatorExpr::from_terms(vec![Term::new(coeff, factors)])
    }

    /// Builds a canonical expression from arbitrary terms.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut acc = Accumulator::default();
        for t in terms {
            acc.push(t.coeff, t.factors);
        }
        acc.finish()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest factor count over all terms; 0 for the empty expression.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(Term::degree).max().unwrap_or(0)
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.iter().all(Term::is_normal_ordered)
    }

    pub fn modes(&self) -> BTreeSet<Mode> {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|l| l.mode))
            .collect()
    }

    /// Coefficient of the identity term.
    pub fn constant(&self) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.factors.is_empty())
            .map(|t| t.coeff)
            .unwrap_or_default()
    }

    /// The terms with exactly `degree` factors.
    pub fn part_of_degree(&self, degree: usize) -> OperatorExpr {
        self.filter(|t| t.degree() == degree)
    }

    pub fn filter(&self, keep: impl Fn(&Term) -> bool) -> OperatorExpr {
        OperatorExpr {
            terms: self.terms.iter().filter(|t| keep(t)).cloned().collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> OperatorExpr {
        OperatorExpr::from_terms(
            self.terms
                .iter()
                .map(|t| Term::new(t.coeff * factor, t.factors.clone())),
        )
    }

    /// Distributes the product; factor lists concatenate in order.
    pub fn multiply(&self, other: &OperatorExpr) -> OperatorExpr {
        let mut acc = Accumulator::default();
        for a in &self.terms {
            for b in &other.terms {
                let mut factors = Vec::with_capacity(a.factors.len() + b.factors.len());
                factors.extend_from_slice(&a.factors);
                factors.extend_from_slice(&b.factors);
                acc.push(a.coeff * b.coeff, factors);
            }
        }
        acc.finish()
    }

    pub fn adjoint(&self) -> OperatorExpr {
        OperatorExpr::from_terms(self.terms.iter().map(Term::adjoint))
    }

    /// Re-canonicalizes an expression (a no-op on values already canonical).
    pub fn canonicalize(&self) -> OperatorExpr {
        OperatorExpr::from_terms(self.terms.iter().cloned())
    }

    /// Rewrites every term in normal order using `{a_m, a_n^dagger} = delta_mn`,
    /// keeping the contraction terms, so the operator itself is unchanged.
    pub fn wick_reorder(&self) -> OperatorExpr {
        let mut acc = Accumulator::default();
        let mut stack: Vec<(Complex64, Vec<Ladder>)> = Vec::new();
        for t in &self.terms {
            stack.push((t.coeff, t.factors.clone()));
            while let Some((coeff, factors)) = stack.pop() {
                if has_unshielded_repeat(&factors) {
                    continue;
                }
                let swap_at = factors
                    .windows(2)
                    .position(|w| w[0].is_annihilator() && w[1].is_creator());
                match swap_at {
                    None => acc.push(coeff, factors),
                    Some(i) => {
                        if factors[i].mode == factors[i + 1].mode {
                            let mut contracted = factors.clone();
                            contracted.drain(i..i + 2);
                            stack.push((coeff, contracted));
                        }
                        let mut swapped = factors;
                        swapped.swap(i, i + 1);
                        stack.push((-coeff, swapped));
                    }
                }
            }
        }
        acc.finish()
    }

    /// The normal-ordering prescription `:A:`. Creators are moved left of
    /// annihilators with one sign flip per creator/annihilator crossing and
    /// all contraction terms are discarded. Factor counts are preserved.
    pub fn normal_order(&self) -> OperatorExpr {
        let mut acc = Accumulator::default();
        for t in &self.terms {
            let (coeff, factors) = normal_order_factors(t.coeff, &t.factors);
            acc.push(coeff, factors);
        }
        acc.finish()
    }

    /// Entrywise comparison of coefficients: every factor list present in
    /// either expression must agree within `tol`.
    pub fn approx_eq(&self, other: &OperatorExpr, tol: f64) -> bool {
        self.max_coeff_diff(other) <= tol
    }

    pub fn max_coeff_diff(&self, other: &OperatorExpr) -> f64 {
        let mut map: BTreeMap<(usize, &[Ladder]), Complex64> = BTreeMap::new();
        for t in &self.terms {
            *map.entry((t.factors.len(), &t.factors)).or_default() += t.coeff;
        }
        for t in &other.terms {
            *map.entry((t.factors.len(), &t.factors)).or_default() -= t.coeff;
        }
        map.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops terms whose coefficient magnitude is at most `tol`.
    pub fn prune(&self, tol: f64) -> OperatorExpr {
        self.filter(|t| t.coeff.norm() > tol)
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
    }
}

/// Stable partition of creators to the left, tracking crossings.
pub(crate) fn normal_order_factors(coeff: Complex64, factors: &[Ladder]) -> (Complex64, Vec<Ladder>) {
    let mut crossings = 0usize;
    let mut annihilators_seen = 0usize;
    for l in factors {
        if l.is_creator() {
            crossings += annihilators_seen;
        } else {
            annihilators_seen += 1;
        }
    }
    let mut ordered: Vec<Ladder> = factors.iter().copied().filter(Ladder::is_creator).collect();
    ordered.extend(factors.iter().copied().filter(Ladder::is_annihilator));
    let coeff = if crossings % 2 == 1 { -coeff } else { coeff };
    (coeff, ordered)
}

#[derive(Default)]
struct Accumulator {
    map: BTreeMap<(usize, Vec<Ladder>), Complex64>,
}

impl Accumulator {
    fn push(&mut self, coeff: Complex64, factors: Vec<Ladder>) {
        if coeff == Complex64::new(0.0, 0.0) {
            return;
        }
        if let Some((c, f)) = canonical_term(coeff, factors) {
            *self.map.entry((f.len(), f)).or_default() += c;
        }
    }

    fn finish(self) -> OperatorExpr {
        let terms = self
            .map
            .into_iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|((_, factors), coeff)| Term { coeff, factors })
            .collect();
        OperatorExpr { terms }
    }
}

impl Add for &OperatorExpr {
    type Output = OperatorExpr;

    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        OperatorExpr::from_terms(self.terms.iter().chain(rhs.terms.iter()).cloned())
    }
}

impl Add for OperatorExpr {
    type Output = OperatorExpr;

    fn add(self, rhs: OperatorExpr) -> OperatorExpr {
        &self + &rhs
    }
}

impl AddAssign<&OperatorExpr> for OperatorExpr {
    fn add_assign(&mut self, rhs: &OperatorExpr) {
        *self = &*self + rhs;
    }
}

impl Sub for &OperatorExpr {
    type Output = OperatorExpr;

    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        self + &(-rhs)
    }
}

impl Sub for OperatorExpr {
    type Output = OperatorExpr;

    fn sub(self, rhs: OperatorExpr) -> OperatorExpr {
        &self - &rhs
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;

    fn neg(self) -> OperatorExpr {
        OperatorExpr {
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(-t.coeff, t.factors.clone()))
                .collect(),
        }
    }
}

impl Mul for &OperatorExpr {
    type Output = OperatorExpr;

    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.multiply(rhs)
    }
}

impl Mul for OperatorExpr {
    type Output = OperatorExpr;

    fn mul(self, rhs: OperatorExpr) -> OperatorExpr {
        self.multiply(&rhs)
    }
}

impl Mul<Complex64> for &OperatorExpr {
    type Output = OperatorExpr;

    fn mul(self, rhs: Complex64) -> OperatorExpr {
        self.scale(rhs)
    }
}

impl Mul<f64> for &OperatorExpr {
    type Output = OperatorExpr;

    fn mul(self, rhs: f64) -> OperatorExpr {
        self.scale(Complex64::new(rhs, 0.0))
    }
}
