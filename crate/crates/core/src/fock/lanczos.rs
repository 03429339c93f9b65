//! Lanczos iteration with full reorthogonalization, shared by the ground-state
//! solver and the Krylov propagator.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sparse::SparseOperator;
use super::state::StateVector;
use crate::error::{Error, Result};

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal Krylov basis `V` and the tridiagonal projection of `H`.
pub(crate) struct Krylov {
    pub basis: Vec<Vec<Complex64>>,
    pub alpha: Vec<f64>,
    /// `beta[j]` couples `basis[j]` to `basis[j + 1]`; the last entry is the
    /// residual norm past the final vector.
    pub beta: Vec<f64>,
}

impl Krylov {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn tridiagonal(&self, m: usize) -> DMatrix<f64> {
        let mut t = DMatrix::zeros(m, m);
        for j in 0..m {
            t[(j, j)] = self.alpha[j];
            if j + 1 < m {
                t[(j, j + 1)] = self.beta[j];
                t[(j + 1, j)] = self.beta[j];
            }
        }
        t
    }

    /// Linear combination `sum_j y_j basis[j]` over the first `y.len()` vectors.
    pub fn combine(&self, y: &[Complex64]) -> Vec<Complex64> {
        let dim = self.basis[0].len();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (v, c) in self.basis.iter().zip(y) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    }
}

/// Runs up to `max_steps` Lanczos steps from the unit vector `start`.
/// Stops early on breakdown (invariant subspace) or when `stop` returns true
/// for the current Krylov state.
pub(crate) fn lanczos(
    h: &SparseOperator,
    start: Vec<Complex64>,
    max_steps: usize,
    mut stop: impl FnMut(&Krylov) -> bool,
) -> Krylov {
    let dim = h.dim();
    let breakdown = 1e-14 * h.norm_inf().max(f64::MIN_POSITIVE);
    let mut k = Krylov { basis: vec![start], alpha: Vec::new(), beta: Vec::new() };
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..max_steps.min(dim) {
        h.matvec_into(&k.basis[j], &mut w);
        let a = dot(&k.basis[j], &w).re;
        for (wi, vi) in w.iter_mut().zip(&k.basis[j]) {
            *wi -= vi * a;
        }
        if j > 0 {
            let b = k.beta[j - 1];
            for (wi, vi) in w.iter_mut().zip(&k.basis[j - 1]) {
                *wi -= vi * b;
            }
        }
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for v in &k.basis {
                let c = dot(v, &w);
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= vi * c;
                }
            }
        }
        let b = norm(&w);
        k.alpha.push(a);
        k.beta.push(b);
        if b <= breakdown || j + 1 == dim || stop(&k) {
            break;
        }
        k.basis.push(w.iter().map(|x| x / b).collect());
    }
    k
}

#[derive(Clone, Debug)]
pub struct EigenOptions {
    /// Seed for the random starting vector.
    pub seed: u64,
    /// Krylov dimension per restart cycle.
    pub max_krylov: usize,
    pub max_restarts: usize,
    /// Target `||Hv - Ev|| / ||H||`.
    pub tol: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { seed: 0x5eed, max_krylov: 250, max_restarts: 40, tol: 1e-10 }
    }
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub energy: f64,
    pub vector: StateVector,
    /// `||H v - E v||` of the returned unit vector.
    pub residual: f64,
    pub matvecs: usize,
}

pub(crate) fn check_hermitian(h: &SparseOperator) -> Result<()> {
    let defect = h.hermiticity_defect();
    if defect > 1e-12 * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

fn lowest_ritz(k: &Krylov, m: usize) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(k.tridiagonal(m));
    let (idx, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty tridiagonal");
    (theta, eig.eigenvectors.column(idx).iter().copied().collect())
}

/// Lowest eigenpair of a Hermitian sparse operator, seeded with
/// [`EigenOptions::default`].
pub fn ground_state(h: &SparseOperator) -> Result<GroundState> {
    ground_state_with(h, &EigenOptions::default())
}

pub fn ground_state_with(h: &SparseOperator, opts: &EigenOptions) -> Result<GroundState> {
    check_hermitian(h)?;
    let dim = h.dim();
    if dim == 0 {
        return Err(Error::EmptySector);
    }
    let scale = h.norm_inf();
    if scale == 0.0 {
        return Ok(GroundState { energy: 0.0, vector: StateVector::basis(dim, 0), residual: 0.0, matvecs: 0 });
    }
    let target = opts.tol * scale;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let n0 = norm(&start);
    start.iter_mut().for_each(|x| *x /= n0);

    let mut matvecs = 0;
    for _ in 0..=opts.max_restarts {
        let k = lanczos(h, start, opts.max_krylov, |k| {
            let m = k.len();
            if m % 8 != 0 {
                return false;
            }
            let (_, y) = lowest_ritz(k, m);
            (k.beta[m - 1] * y[m - 1]).abs() <= 0.1 * target
        });
        matvecs += k.len();
        let m = k.len();
        let (_, y) = lowest_ritz(&k, m);
        let yc: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut x = k.combine(&yc);
        let nx = norm(&x);
        x.iter_mut().for_each(|v| *v /= nx);
        let hx = h.matvec(&x);
        let energy = dot(&x, &hx).re;
        let residual = norm(&hx.iter().zip(&x).map(|(a, b)| a - b * energy).collect::<Vec<_>>());
        if residual <= target {
            return Ok(GroundState { energy, vector: StateVector::new(x), residual, matvecs });
        }
        start = x;
    }
    Err(Error::NoConvergence(matvecs))
}

/// All eigenvalues of a Hermitian operator by dense diagonalization,
/// ascending. Intended for sectors of a few hundred states.
pub fn dense_eigenvalues(h: &SparseOperator) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    let eig = SymmetricEigen::new(h.to_dense());
    let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Lowest eigenpair by dense diagonalization, the oracle for
/// [`ground_state`] on small sectors.
pub fn dense_ground_state(h: &SparseOperator) -> Result<(f64, StateVector)> {
    check_hermitian(h)?;
    if h.dim() == 0 {
        return Err(Error::EmptySector);
    }
    let eig = SymmetricEigen::new(h.to_dense());
    let (idx, &e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    Ok((e, StateVector::new(eig.eigenvectors.column(idx).iter().copied().collect())))
}
