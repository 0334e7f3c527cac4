//! Eigensolvers for linear pencils `A x = mu B x`.
//!
//! Small pencils are reduced to `B^{-1} A` and solved densely; large ones use
//! shift-and-invert Arnoldi with explicit restarts. Both paths hand their
//! pairs to [`polish`], which applies the two-sided Rayleigh quotient of the
//! complex-symmetric pencil followed by shifted inverse iteration.

use log::debug;

use crate::error::{Error, Result};
use crate::linalg::{dot_t, norm2, DenseLu, DenseMatrix, Factorization, SparseLu, SparseMatrix, C64};

/// Dense-versus-Krylov threshold on the pencil dimension.
pub const DENSE_LIMIT: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: C64,
    /// Normalized to unit Euclidean norm.
    pub vector: Vec<C64>,
    /// `||A x - mu B x|| / ||x||`.
    pub residual: f64,
}

fn normalize(v: &mut [C64]) -> f64 {
    let n = norm2(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

pub fn pencil_residual(a: &SparseMatrix, b: &SparseMatrix, mu: C64, x: &[C64]) -> f64 {
    let ax = a.matvec(x);
    let bx = b.matvec(x);
    let r: Vec<C64> = ax.iter().zip(&bx).map(|(p, q)| p - mu * q).collect();
    norm2(&r) / norm2(x)
}

/// All eigenpairs of the pencil via `B^{-1} A`, unpolished.
pub fn dense_pencil_eigen(a: &SparseMatrix, b: &SparseMatrix) -> Result<Vec<EigenPair>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(vec![]);
    }
    let lu = DenseLu::factor(&b.to_dense()).map_err(|_| Error::Eigen("mass matrix B is singular".into()))?;
    let c = lu.solve_matrix(&a.to_dense());
    let eig = c.eigen().map_err(|e| Error::Eigen(format!("dense eigensolver failed: {e:?}")))?;
    let s = eig.S().column_vector();
    let u = eig.U();
    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let mut v: Vec<C64> = (0..n).map(|i| u[(i, k)]).collect();
        normalize(&mut v);
        let mu = s[k];
        let residual = pencil_residual(a, b, mu, &v);
        pairs.push(EigenPair { value: mu, vector: v, residual });
    }
    Ok(pairs)
}

/// Rayleigh quotient `x^T A x / x^T B x` plus up to `steps` inverse
/// iterations; the refined pair is kept only if it stays near the input.
pub fn polish(a: &SparseMatrix, b: &SparseMatrix, pair: &EigenPair, steps: usize) -> EigenPair {
    let mut best = pair.clone();
    let mut x = pair.vector.clone();
    let rq = |x: &[C64]| dot_t(x, &a.matvec(x)) / dot_t(x, &b.matvec(x));
    let mut mu = rq(&x);
    let scale = pair.value.norm().max(1.0);
    for step in 0..=steps {
        if !mu.is_finite() || (mu - pair.value).norm() > 1e-3 * scale {
            break;
        }
        let res = pencil_residual(a, b, mu, &x);
        if res < best.residual {
            best = EigenPair {
                value: mu,
                vector: x.clone(),
                residual: res,
            };
        }
        if step == steps || res < 1e-13 * a.max_abs() {
            break;
        }
        let shifted = a.combine(C64::new(1.0, 0.0), b, -mu);
        let Ok(lu) = SparseLu::factor(&shifted) else { break };
        let mut y = lu.solve(&b.matvec(&x));
        if normalize(&mut y) == 0.0 || !y.iter().all(|v| v.is_finite()) {
            break;
        }
        x = y;
        mu = rq(&x);
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArnoldiOptions {
    /// Krylov dimension; `0` picks `max(2 count + 20, 40)`.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    pub tol: f64,
}

impl Default for ArnoldiOptions {
    fn default() -> Self {
        Self {
            krylov_dim: 0,
            max_restarts: 30,
            tol: 1e-12,
        }
    }
}

/// The `count` eigenpairs nearest `shift`, by Arnoldi on `(A - shift B)^{-1} B`.
///
/// A breakdown or factorization failure at `shift` triggers one retry at a
/// slightly perturbed shift.
pub fn shift_invert_arnoldi(
    a: &SparseMatrix,
    b: &SparseMatrix,
    shift: C64,
    count: usize,
    opts: ArnoldiOptions,
) -> Result<Vec<EigenPair>> {
    match arnoldi_at(a, b, shift, count, opts) {
        Ok(p) => Ok(p),
        Err(e) => {
            let perturbed = shift * C64::new(1.0 + 1e-6, 1e-6) + C64::new(1e-6, 0.0);
            debug!("Arnoldi failed at shift {shift} ({e}); retrying at {perturbed}");
            arnoldi_at(a, b, perturbed, count, opts)
        }
    }
}

fn arnoldi_at(a: &SparseMatrix, b: &SparseMatrix, shift: C64, count: usize, opts: ArnoldiOptions) -> Result<Vec<EigenPair>> {
    let n = a.nrows();
    if count == 0 || n == 0 {
        return Ok(vec![]);
    }
    let m = if opts.krylov_dim == 0 { (2 * count + 20).max(40) } else { opts.krylov_dim }.min(n);
    let lu = SparseLu::factor(&a.combine(C64::new(1.0, 0.0), b, -shift))?;
    let op = |v: &[C64]| lu.solve(&b.matvec(v));
    // Deterministic start vector.
    let mut start: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0 + (i as f64 * 0.618_033_988_7).fract(), 0.3 * (i as f64 * 0.414_213_562_4).fract()))
        .collect();
    normalize(&mut start);
    let want = count.min(m.saturating_sub(1)).max(1);
    let mut result = Vec::new();
    for restart in 0..=opts.max_restarts {
        let (v, h, beta) = arnoldi_factorization(&op, &start, m)?;
        let k = v.len();
        let hk = DenseMatrix::from_fn(k, k, |i, j| h[(i, j)]);
        let eig = hk.eigen().map_err(|e| Error::Eigen(format!("Hessenberg eigensolver failed: {e:?}")))?;
        let s = eig.S().column_vector();
        let y = eig.U();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&i, &j| s[j].norm().total_cmp(&s[i].norm()).then(i.cmp(&j)));
        let mut converged = true;
        result.clear();
        let mut next = vec![C64::new(0.0, 0.0); n];
        for &idx in order.iter().take(want) {
            let theta = s[idx];
            if theta.norm() == 0.0 {
                return Err(Error::Eigen("zero Ritz value in shift-invert Arnoldi".into()));
            }
            let ynorm: f64 = (0..k).map(|i| y[(i, idx)].norm_sqr()).sum::<f64>().sqrt();
            let est = beta * y[(k - 1, idx)].norm() / ynorm;
            if est > opts.tol * theta.norm() {
                converged = false;
            }
            let mut x = vec![C64::new(0.0, 0.0); n];
            for (j, vj) in v.iter().enumerate() {
                let c = y[(j, idx)];
                x.iter_mut().zip(vj).for_each(|(xi, vi)| *xi += c * vi);
            }
            normalize(&mut x);
            next.iter_mut().zip(&x).for_each(|(a, b)| *a += b);
            let mu = shift + 1.0 / theta;
            let residual = pencil_residual(a, b, mu, &x);
            result.push(EigenPair { value: mu, vector: x, residual });
        }
        if converged || k < m {
            debug!("Arnoldi converged after {restart} restarts");
            return Ok(result);
        }
        if normalize(&mut next) == 0.0 {
            return Err(Error::Eigen("restart vector vanished".into()));
        }
        start = next;
    }
    debug!("Arnoldi reached the restart limit; returning best Ritz pairs");
    Ok(result)
}

type Basis = Vec<Vec<C64>>;

/// `m`-step Arnoldi with twice-iterated Gram-Schmidt; stops early on an
/// invariant subspace. Returns the basis, Hessenberg matrix and `h_{m+1,m}`.
fn arnoldi_factorization(op: &dyn Fn(&[C64]) -> Vec<C64>, start: &[C64], m: usize) -> Result<(Basis, DenseMatrix, f64)> {
    let mut v: Basis = vec![start.to_vec()];
    let mut h = DenseMatrix::zeros(m + 1, m);
    let mut beta = 0.0;
    for j in 0..m {
        let mut w = op(&v[j]);
        if !w.iter().all(|x| x.is_finite()) {
            return Err(Error::Eigen("non-finite Krylov vector".into()));
        }
        let wnorm0 = norm2(&w);
        for _ in 0..2 {
            for (i, vi) in v.iter().enumerate() {
                let c: C64 = vi.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                h[(i, j)] += c;
                w.iter_mut().zip(vi).for_each(|(wk, vk)| *wk -= c * vk);
            }
        }
        beta = norm2(&w);
        h[(j + 1, j)] = C64::new(beta, 0.0);
        if beta <= 1e-14 * wnorm0 {
            if j == 0 {
                return Err(Error::Eigen("Krylov breakdown at the first step".into()));
            }
            return Ok((v, h, 0.0));
        }
        if j + 1 < m {
            w.iter_mut().for_each(|x| *x /= beta);
            v.push(w);
        }
    }
    Ok((v, h, beta))
}
