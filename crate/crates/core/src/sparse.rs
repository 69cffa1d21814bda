//! Compressed-sparse-row complex operators.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const DEFAULT_DROP_TOLERANCE: f64 = 1e-14;
/// `hermitian_flag` is set when `max |A - A^dagger| <= HERMITIAN_TOLERANCE`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Largest dimension converted to a dense matrix.
pub const MAX_DENSE_DIM: usize = 1 << 14;

const PAR_MATVEC_THRESHOLD: usize = 1 << 12;

/// Accumulates `(row, col, value)` triplets; duplicates are summed.
#[derive(Debug, Clone)]
pub struct TripletBuilder {
    dim: usize,
    triplets: Vec<(usize, usize, Complex64)>,
    drop_tol: f64,
}

impl TripletBuilder {
    pub fn new(dim: usize) -> Self {
        TripletBuilder {
            dim,
            triplets: Vec::new(),
            drop_tol: DEFAULT_DROP_TOLERANCE,
        }
    }

    pub fn drop_tolerance(mut self, tol: f64) -> Self {
        self.drop_tol = tol;
        self
    }

    #[inline]
    pub fn push(&mut self, row: usize, col: usize, value: Complex64) {
        debug_assert!(row < self.dim && col < self.dim);
        self.triplets.push((row, col, value));
    }

    pub fn build(mut self) -> SparseOperator {
        self.triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; self.dim + 1];
        let mut cols = Vec::with_capacity(self.triplets.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(self.triplets.len());
        let mut it = self.triplets.into_iter().peekable();
        while let Some((r, c, mut v)) = it.next() {
            while let Some(&(r2, c2, v2)) = it.peek() {
                if r2 != r || c2 != c {
                    break;
                }
                v += v2;
                it.next();
            }
            if v.norm() > self.drop_tol {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
            }
        }
        for r in 0..self.dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        SparseOperator::from_csr(self.dim, row_ptr, cols, vals, self.drop_tol)
    }
}

/// Square sparse matrix with complex entries.
///
/// Immutable after construction. No stored entry has magnitude at or below
/// the drop tolerance.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
    drop_tol: f64,
    hermitian: bool,
}

impl SparseOperator {
    fn from_csr(
        dim: usize,
        row_ptr: Vec<usize>,
        cols: Vec<usize>,
        vals: Vec<Complex64>,
        drop_tol: f64,
    ) -> Self {
        let mut op = SparseOperator {
            dim,
            row_ptr,
            cols,
            vals,
            drop_tol,
            hermitian: false,
        };
        op.hermitian = op.hermiticity_defect() <= HERMITIAN_TOLERANCE;
        op
    }

    pub fn zeros(dim: usize) -> Self {
        TripletBuilder::new(dim).build()
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut b = TripletBuilder::new(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            b.push(i, i, Complex64::new(d, 0.0));
        }
        b.build()
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::domain(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut b = TripletBuilder::new(m.nrows());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                b.push(r, c, m[(r, c)]);
            }
        }
        Ok(b.build())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn drop_tolerance(&self) -> f64 {
        self.drop_tol
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Re-prunes with a different drop tolerance.
    pub fn with_drop_tolerance(&self, tol: f64) -> Self {
        let mut b = TripletBuilder::new(self.dim).drop_tolerance(tol);
        for (r, c, v) in self.entries() {
            b.push(r, c, v);
        }
        b.build()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k]))
        })
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.cols[k], self.vals[k]))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        match self.cols[lo..hi].binary_search(&c) {
            Ok(k) => self.vals[lo + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn check_dim(&self, other: &SparseOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::domain(format!(
                "dimension mismatch: {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    fn builder(&self) -> TripletBuilder {
        TripletBuilder::new(self.dim).drop_tolerance(self.drop_tol)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: Complex64, other: &SparseOperator) -> Result<Self> {
        self.check_dim(other)?;
        let mut b = self.builder();
        b.triplets.reserve(self.nnz() + other.nnz());
        for (r, c, v) in self.entries() {
            b.push(r, c, v);
        }
        for (r, c, v) in other.entries() {
            b.push(r, c, s * v);
        }
        Ok(b.build())
    }

    pub fn add(&self, other: &SparseOperator) -> Result<Self> {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &SparseOperator) -> Result<Self> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        let mut b = self.builder();
        for (r, c, v) in self.entries() {
            b.push(r, c, s * v);
        }
        b.build()
    }

    pub fn adjoint(&self) -> Self {
        let mut b = self.builder();
        for (r, c, v) in self.entries() {
            b.push(c, r, v.conj());
        }
        b.build()
    }

    /// Sparse product `self * other`.
    pub fn matmul(&self, other: &SparseOperator) -> Result<Self> {
        self.check_dim(other)?;
        let mut acc = vec![Complex64::new(0.0, 0.0); self.dim];
        let mut touched: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.dim];
        let mut b = self.builder();
        for r in 0..self.dim {
            for (k, a) in self.row(r) {
                for (c, v) in other.row(k) {
                    if !seen[c] {
                        seen[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * v;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                b.push(r, c, acc[c]);
                acc[c] = Complex64::new(0.0, 0.0);
                seen[c] = false;
            }
            touched.clear();
        }
        Ok(b.build())
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &SparseOperator) -> Result<Self> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// `{A, B} = AB + BA`.
    pub fn anticommutator(&self, other: &SparseOperator) -> Result<Self> {
        self.matmul(other)?.add(&other.matmul(self)?)
    }

    /// Largest entrywise deviation `max |A - B|`.
    pub fn max_abs_diff(&self, other: &SparseOperator) -> Result<f64> {
        self.check_dim(other)?;
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            let (mut i, mut j) = (self.row_ptr[r], other.row_ptr[r]);
            let (ie, je) = (self.row_ptr[r + 1], other.row_ptr[r + 1]);
            while i < ie || j < je {
                let ci = if i < ie { self.cols[i] } else { usize::MAX };
                let cj = if j < je { other.cols[j] } else { usize::MAX };
                let d = if ci == cj {
                    let d = self.vals[i] - other.vals[j];
                    i += 1;
                    j += 1;
                    d
                } else if ci < cj {
                    i += 1;
                    self.vals[i - 1]
                } else {
                    j += 1;
                    other.vals[j - 1]
                };
                worst = worst.max(d.norm());
            }
        }
        Ok(worst)
    }

    fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (r, c, v) in self.entries() {
            worst = worst.max((v - self.get(c, r).conj()).norm());
        }
        worst
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.dim {
            return Err(Error::domain(format!(
                "vector length {} does not match operator dimension {}",
                x.len(),
                self.dim
            )));
        }
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    pub(crate) fn matvec_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        let row = |r: usize| -> Complex64 {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(|k| self.vals[k] * x[self.cols[k]])
                .sum()
        };
        if self.dim >= PAR_MATVEC_THRESHOLD {
            y.par_iter_mut().enumerate().for_each(|(r, out)| *out = row(r));
        } else {
            y.iter_mut().enumerate().for_each(|(r, out)| *out = row(r));
        }
    }

    /// `<x|A|x>` without normalization.
    pub fn expectation(&self, x: &[Complex64]) -> Result<Complex64> {
        let y = self.matvec(x)?;
        Ok(x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v;
        }
        m
    }

    /// Restriction to the rows and columns listed in `keep` (in that order).
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let mut pos = std::collections::HashMap::with_capacity(keep.len());
        for (i, &k) in keep.iter().enumerate() {
            if k >= self.dim {
                return Err(Error::domain(format!("index {k} outside dimension {}", self.dim)));
            }
            pos.insert(k, i);
        }
        let mut b = TripletBuilder::new(keep.len()).drop_tolerance(self.drop_tol);
        for (i, &r) in keep.iter().enumerate() {
            for (c, v) in self.row(r) {
                if let Some(&j) = pos.get(&c) {
                    b.push(i, j, v);
                }
            }
        }
        Ok(b.build())
    }
}
