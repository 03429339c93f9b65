use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::basis::{Basis, BasisState};
use super::state::StateVector;
use crate::algebra::OperatorExpr;
use crate::error::{Error, Result};

/// Square complex matrix in compressed sparse row layout.
///
/// `truncation_drops` counts nonzero matrix elements that were discarded at
/// assembly time because their image left the enumerated sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
    pub truncation_drops: u64,
}

impl SparseOperator {
    pub fn zeros(dim: usize) -> Self {
        SparseOperator {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
            truncation_drops: 0,
        }
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        Self::from_triplets(values.len(), values.iter().enumerate().map(|(i, v)| (i, i, *v)))
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "matrix must be square");
        let n = m.nrows();
        let mut t = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if m[(i, j)] != Complex64::new(0.0, 0.0) {
                    t.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_triplets(n, t)
    }

    /// Duplicate entries are summed in input order; exact zeros are dropped.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Self {
        let mut t: Vec<(usize, usize, Complex64)> = triplets.into_iter().collect();
        t.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside dimension {dim}");
            match merged.last_mut() {
                Some(last) if (last.0, last.1) == (r, c) => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != Complex64::new(0.0, 0.0));
        let mut row_ptr = vec![0usize; dim + 1];
        for &(r, _, _) in &merged {
            row_ptr[r + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let cols = merged.iter().map(|&(_, c, _)| c).collect();
        let vals = merged.iter().map(|&(_, _, v)| v).collect();
        SparseOperator { dim, row_ptr, cols, vals, truncation_drops: 0 }
    }

    pub(crate) fn from_raw_parts(
        dim: usize,
        row_ptr: Vec<usize>,
        cols: Vec<usize>,
        vals: Vec<Complex64>,
        truncation_drops: u64,
    ) -> Self {
        SparseOperator { dim, row_ptr, cols, vals, truncation_drops }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.cols
    }

    pub fn values(&self) -> &[Complex64] {
        &self.vals
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k]))
        })
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let row = &self.cols[self.row_ptr[r]..self.row_ptr[r + 1]];
        match row.binary_search(&c) {
            Ok(k) => self.vals[self.row_ptr[r] + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.vals.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute row sum; bounds the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.vals[self.row_ptr[r]..self.row_ptr[r + 1]].iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> SparseOperator {
        let mut m = Self::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v.conj())));
        m.truncation_drops = self.truncation_drops;
        m
    }

    /// `max |H - H^dagger|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        (self - &self.adjoint()).max_abs()
    }

    pub fn scale(&self, s: Complex64) -> SparseOperator {
        let mut m = self.clone();
        for v in &mut m.vals {
            *v *= s;
        }
        m
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *out = acc;
        }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        Ok(StateVector::new(self.matvec(v.amplitudes())))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] += v;
        }
        m
    }
}

impl std::ops::Add for &SparseOperator {
    type Output = SparseOperator;

    fn add(self, rhs: &SparseOperator) -> SparseOperator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in operator sum");
        let mut m = SparseOperator::from_triplets(self.dim, self.triplets().chain(rhs.triplets()));
        m.truncation_drops = self.truncation_drops + rhs.truncation_drops;
        m
    }
}

impl std::ops::Sub for &SparseOperator {
    type Output = SparseOperator;

    fn sub(self, rhs: &SparseOperator) -> SparseOperator {
        self + &rhs.scale(Complex64::new(-1.0, 0.0))
    }
}

/// One term of an expression lowered to mode indices, rightmost factor last.
struct CompiledTerm {
    coeff: Complex64,
    ladders: Vec<(usize, bool)>,
}

fn compile(expr: &OperatorExpr, basis: &Basis) -> Result<Vec<CompiledTerm>> {
    expr.terms()
        .iter()
        .map(|t| {
            let ladders = t
                .factors
                .iter()
                .map(|l| Ok((basis.modes().index_of(&l.mode)?, l.is_creator())))
                .collect::<Result<Vec<_>>>()?;
            Ok(CompiledTerm { coeff: t.coeff, ladders })
        })
        .collect()
}

#[inline]
fn act(term: &CompiledTerm, s: BasisState) -> Option<(f64, BasisState)> {
    let mut sign = 1.0;
    let mut cur = s;
    for &(i, create) in term.ladders.iter().rev() {
        let (sg, next) = cur.apply(i, create)?;
        sign *= sg;
        cur = next;
    }
    Some((sign, cur))
}

/// Matrix of `expr` restricted to `basis`: entry `(i, j)` is
/// `<basis_i| expr |basis_j>`. Images outside the sector are dropped and
/// counted in [`SparseOperator::truncation_drops`]. Columns are assembled in
/// parallel; the result does not depend on the thread count.
pub fn to_matrix(expr: &OperatorExpr, basis: &Basis) -> Result<SparseOperator> {
    let terms = compile(expr, basis)?;
    let dim = basis.len();
    let columns: Vec<(Vec<(usize, usize, Complex64)>, u64)> = (0..dim)
        .into_par_iter()
        .map(|j| {
            let s = basis.state(j);
            let mut entries = Vec::new();
            let mut drops = 0u64;
            for t in &terms {
                if let Some((sign, image)) = act(t, s) {
                    match basis.index_of(image) {
                        Some(i) => entries.push((i, j, t.coeff * sign)),
                        None => drops += 1,
                    }
                }
            }
            (entries, drops)
        })
        .collect();
    let drops = columns.iter().map(|(_, d)| d).sum();
    let mut m = SparseOperator::from_triplets(dim, columns.into_iter().flat_map(|(e, _)| e));
    m.truncation_drops = drops;
    Ok(m)
}

/// `<v| a |v>`.
pub fn expectation(a: &SparseOperator, v: &StateVector) -> Result<Complex64> {
    let av = a.apply(v)?;
    Ok(v.inner(&av))
}
