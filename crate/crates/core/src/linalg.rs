//! Complex linear algebra used by the assemblers and solvers.
//!
//! Global operators are stored as CSR matrices built from triplets. Sparse
//! factorizations are delegated to faer's supernodal LU, dense ones to faer's
//! partial-pivoting LU. All matrices handled here are complex symmetric
//! (`A == A^T`), never Hermitian-symmetrized.

use std::io::{self, BufRead, Write};

use faer::linalg::solvers::PartialPivLu;
use faer::prelude::*;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type DenseMatrix = Mat<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Unconjugated dot product `x^T y`.
pub fn dot_t(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Coordinate-format builder; duplicate entries are summed.
#[derive(Debug, Clone)]
pub struct Triplets {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl Triplets {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn square(n: usize) -> Self {
        Self::new(n, n)
    }

    #[inline]
    pub fn push(&mut self, row: usize, col: usize, value: C64) {
        debug_assert!(row < self.nrows && col < self.ncols);
        if value != C64::new(0.0, 0.0) {
            self.entries.push((row, col, value));
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn build(&self) -> SparseMatrix {
        SparseMatrix::from_entries(self.nrows, self.ncols, &self.entries)
    }
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn from_entries(nrows: usize, ncols: usize, entries: &[(usize, usize, C64)]) -> Self {
        let mut sorted: Vec<(usize, usize, C64)> = entries.to_vec();
        sorted.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<C64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, cidx, v) in sorted {
            if last == Some((r, cidx)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(cidx);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, cidx));
            }
        }
        for r in 0..nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn from_dense(a: &DenseMatrix) -> Self {
        let mut t = Triplets::new(a.nrows(), a.ncols());
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                t.push(i, j, a[(i, j)]);
            }
        }
        t.build()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates `(row, col, value)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.nrows).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.col_idx[range.clone()].binary_search(&col) {
            Ok(k) => self.values[range.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows)
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .map(|k| self.values[k] * x[self.col_idx[k]])
                    .sum()
            })
            .collect()
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: C64, other: &SparseMatrix, beta: C64) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let entries: Vec<_> = self
            .iter()
            .map(|(r, c, v)| (r, c, alpha * v))
            .chain(other.iter().map(|(r, c, v)| (r, c, beta * v)))
            .collect();
        SparseMatrix::from_entries(self.nrows, self.ncols, &entries)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let entries: Vec<_> = self.iter().map(|(r, c, v)| (c, r, v)).collect();
        SparseMatrix::from_entries(self.ncols, self.nrows, &entries)
    }

    /// Max-abs entry of `self - self^T`.
    pub fn symmetry_defect(&self) -> f64 {
        let t = self.transpose();
        self.combine(C64::new(1.0, 0.0), &t, C64::new(-1.0, 0.0))
            .values
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Induced 1-norm (max column sum).
    pub fn norm1(&self) -> f64 {
        let mut cols = vec![0.0; self.ncols];
        for (_, c, v) in self.iter() {
            cols[c] += v.norm();
        }
        cols.into_iter().fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut a = DenseMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.iter() {
            a[(r, c)] += v;
        }
        a
    }

    fn to_faer(&self) -> Result<SparseColMat<usize, C64>> {
        let triplets: Vec<Triplet<usize, usize, C64>> =
            self.iter().map(|(r, c, v)| Triplet::new(r, c, v)).collect();
        SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &triplets)
            .map_err(|e| Error::Assembly(format!("sparse conversion failed: {e:?}")))
    }
}

/// A factorization that can solve with the matrix and its transpose.
pub trait Factorization {
    fn dim(&self) -> usize;
    fn solve(&self, rhs: &[C64]) -> Vec<C64>;
    fn solve_transpose(&self, rhs: &[C64]) -> Vec<C64>;
}

fn col_from(v: &[C64]) -> Mat<C64> {
    Mat::from_fn(v.len(), 1, |i, _| v[i])
}

fn vec_from(m: &Mat<C64>) -> Vec<C64> {
    (0..m.nrows()).map(|i| m[(i, 0)]).collect()
}

pub struct SparseLu {
    n: usize,
    lu: Lu<usize, C64>,
}

impl SparseLu {
    pub fn factor(a: &SparseMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::Assembly("LU of a non-square matrix".into()));
        }
        let lu = a.to_faer()?.sp_lu().map_err(|e| Error::Singular {
            context: format!("sparse LU: {e:?}"),
            condition: f64::INFINITY,
        })?;
        Ok(Self { n: a.nrows(), lu })
    }
}

impl Factorization for SparseLu {
    fn dim(&self) -> usize {
        self.n
    }

    fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        vec_from(&self.lu.solve(col_from(rhs)))
    }

    fn solve_transpose(&self, rhs: &[C64]) -> Vec<C64> {
        vec_from(&self.lu.solve_transpose(col_from(rhs)))
    }
}

pub struct DenseLu {
    n: usize,
    lu: PartialPivLu<C64>,
    pivot_ratio: f64,
}

impl DenseLu {
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::Assembly("LU of a non-square matrix".into()));
        }
        let lu = a.partial_piv_lu();
        let u = lu.U();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..a.nrows() {
            let d = u[(i, i)].norm();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        let pivot_ratio = if a.nrows() == 0 { 1.0 } else { lo / hi };
        if !(pivot_ratio > 0.0) || !pivot_ratio.is_finite() {
            return Err(Error::Singular {
                context: "dense LU: zero pivot".into(),
                condition: f64::INFINITY,
            });
        }
        Ok(Self {
            n: a.nrows(),
            lu,
            pivot_ratio,
        })
    }

    /// Smallest over largest pivot magnitude; a cheap singularity indicator.
    pub fn pivot_ratio(&self) -> f64 {
        self.pivot_ratio
    }

    pub fn solve_matrix(&self, rhs: &DenseMatrix) -> DenseMatrix {
        self.lu.solve(rhs)
    }
}

impl Factorization for DenseLu {
    fn dim(&self) -> usize {
        self.n
    }

    fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        vec_from(&self.lu.solve(col_from(rhs)))
    }

    fn solve_transpose(&self, rhs: &[C64]) -> Vec<C64> {
        vec_from(&self.lu.solve_transpose(col_from(rhs)))
    }
}

/// Hager–Higham estimate of `||A^{-1}||_1`.
pub fn inverse_norm1_estimate(f: &dyn Factorization) -> f64 {
    let n = f.dim();
    if n == 0 {
        return 0.0;
    }
    let mut x = vec![C64::new(1.0 / n as f64, 0.0); n];
    let mut est = 0.0;
    for _ in 0..5 {
        let y = f.solve(&x);
        let y_norm: f64 = y.iter().map(|v| v.norm()).sum();
        if !y_norm.is_finite() {
            return f64::INFINITY;
        }
        if y_norm <= est {
            break;
        }
        est = y_norm;
        let xi: Vec<C64> = y
            .iter()
            .map(|v| if v.norm() > 0.0 { v / v.norm() } else { C64::new(1.0, 0.0) })
            .collect();
        // A^{-H} xi = conj(A^{-T} conj(xi))
        let conj_xi: Vec<C64> = xi.iter().map(|v| v.conj()).collect();
        let z: Vec<C64> = f.solve_transpose(&conj_xi).iter().map(|v| v.conj()).collect();
        let (j, zmax) = z
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
        if zmax <= ztx {
            break;
        }
        x = vec![C64::new(0.0, 0.0); n];
        x[j] = C64::new(1.0, 0.0);
    }
    est
}

pub fn dense_norm1(a: &DenseMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn dense_matvec(a: &DenseMatrix, x: &[C64]) -> Vec<C64> {
    assert_eq!(a.ncols(), x.len());
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)] * x[j]).sum())
        .collect()
}

/// `a^T * b` for dense matrices.
pub fn transpose_mul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.transpose() * b
}

/// Max-abs entry of `a - a^T`.
pub fn dense_symmetry_defect(a: &DenseMatrix) -> f64 {
    let mut d = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            d = d.max((a[(i, j)] - a[(j, i)]).norm());
        }
    }
    d
}

/// Writes a dense matrix: a `rows cols` header, then one line per row with
/// space-separated `re,im` pairs.
pub fn write_dense<W: Write>(mut w: W, a: &DenseMatrix) -> io::Result<()> {
    writeln!(w, "{} {}", a.nrows(), a.ncols())?;
    for i in 0..a.nrows() {
        let row: Vec<String> = (0..a.ncols())
            .map(|j| format!("{:e},{:e}", a[(i, j)].re, a[(i, j)].im))
            .collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn read_dense<R: BufRead>(r: R) -> io::Result<DenseMatrix> {
    let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| bad("missing header"))??;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad("bad header")))
        .collect::<io::Result<_>>()?;
    if dims.len() != 2 {
        return Err(bad("header must be `rows cols`"));
    }
    let mut a = DenseMatrix::zeros(dims[0], dims[1]);
    for i in 0..dims[0] {
        let line = lines.next().ok_or_else(|| bad("missing row"))??;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != dims[1] {
            return Err(bad("row length mismatch"));
        }
        for (j, e) in entries.iter().enumerate() {
            let (re, im) = e.split_once(',').ok_or_else(|| bad("entry must be re,im"))?;
            a[(i, j)] = C64::new(
                re.parse().map_err(|_| bad("bad real part"))?,
                im.parse().map_err(|_| bad("bad imaginary part"))?,
            );
        }
    }
    Ok(a)
}

/// Writes a sparse matrix: a `rows cols nnz` header, then `row col re,im`
/// lines (0-based indices, row-major order).
pub fn write_sparse<W: Write>(mut w: W, a: &SparseMatrix) -> io::Result<()> {
    writeln!(w, "{} {} {}", a.nrows(), a.ncols(), a.nnz())?;
    for (r, c, v) in a.iter() {
        writeln!(w, "{} {} {:e},{:e}", r, c, v.re, v.im)?;
    }
    Ok(())
}
