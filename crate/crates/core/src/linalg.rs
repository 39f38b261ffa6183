//! Small dense linear algebra: a row-major matrix, Cholesky factorization with
//! jitter escalation and triangular solves.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self {
            rows: n,
            cols: m,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Adds `value` to every diagonal entry.
    pub fn add_diagonal(&mut self, value: T) {
        for i in 0..self.rows.min(self.cols) {
            self[(i, i)] += value;
        }
    }

    pub fn max_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn frobenius_distance(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<T>()
            .sqrt()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Diagonal jitter schedule tried when a plain factorization fails.
///
/// The unjittered matrix is always tried first; afterwards the jitter starts
/// at `initial` and is multiplied by `factor` until it exceeds `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JitterPolicy {
    pub initial: f64,
    pub factor: f64,
    pub max: f64,
    /// Largest tolerated `|a_ij - a_ji|`.
    pub symmetry_tol: f64,
}

impl Default for JitterPolicy {
    fn default() -> Self {
        Self {
            initial: 1e-10,
            factor: 10.0,
            max: 1e-4,
            symmetry_tol: 1e-10,
        }
    }
}

impl JitterPolicy {
    /// Jitter values in the order they are attempted, starting with zero.
    pub fn schedule(&self) -> Vec<f64> {
        let mut out = vec![0.0];
        let mut j = self.initial;
        // relative slack so 1e-10 * 10^6 still counts as <= 1e-4
        while j <= self.max * (1.0 + 1e-9) {
            out.push(j);
            j *= self.factor;
        }
        out
    }
}

/// Lower Cholesky factor `L` with `L Lᵀ = A + jitter·I`.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    factor: Matrix<T>,
    jitter: T,
}

impl<T: Scalar> Cholesky<T> {
    /// Plain factorization; returns `None` when a pivot is not strictly positive.
    pub fn try_new(a: &Matrix<T>) -> Option<Self> {
        assert!(a.is_square(), "Cholesky of non-square matrix");
        let n = a.nrows();
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut pivot = a[(j, j)];
            for k in 0..j {
                pivot -= l[(j, k)] * l[(j, k)];
            }
            if !(pivot > T::zero()) || !pivot.is_finite() {
                return None;
            }
            let ljj = pivot.sqrt();
            l[(j, j)] = ljj;
            for i in (j + 1)..n {
                let s = a[(i, j)] - dot(&l.row(i)[..j], &l.row(j)[..j]);
                l[(i, j)] = s / ljj;
            }
        }
        Some(Self {
            factor: l,
            jitter: T::zero(),
        })
    }

    /// Factorizes a symmetric matrix, escalating diagonal jitter per `policy`.
    pub fn with_jitter(a: &Matrix<T>, policy: &JitterPolicy) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                found: a.ncols(),
            });
        }
        let asym = a.max_asymmetry();
        if asym.as_f64() > policy.symmetry_tol || asym.is_nan() {
            return Err(Error::Asymmetry {
                max_asymmetry: asym.as_f64(),
            });
        }
        for jitter in policy.schedule() {
            let jitter = T::of(jitter);
            let attempt = if jitter == T::zero() {
                Self::try_new(a)
            } else {
                let mut shifted = a.clone();
                shifted.add_diagonal(jitter);
                Self::try_new(&shifted)
            };
            if let Some(mut chol) = attempt {
                chol.jitter = jitter;
                return Ok(chol);
            }
        }
        Err(Error::CholeskyFailure {
            max_jitter: policy.max,
        })
    }

    pub fn factor(&self) -> &Matrix<T> {
        &self.factor
    }

    pub fn into_factor(self) -> Matrix<T> {
        self.factor
    }

    pub fn jitter(&self) -> T {
        self.jitter
    }

    pub fn dim(&self) -> usize {
        self.factor.nrows()
    }

    /// Solves `L x = b`.
    pub fn solve_lower(&self, b: &[T]) -> Vec<T> {
        let l = &self.factor;
        let n = l.nrows();
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        for i in 0..n {
            let s = dot(&l.row(i)[..i], &x[..i]);
            x[i] = (x[i] - s) / l[(i, i)];
        }
        x
    }

    /// Solves `Lᵀ x = b`.
    pub fn solve_upper(&self, b: &[T]) -> Vec<T> {
        let l = &self.factor;
        let n = l.nrows();
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= l[(k, i)] * x[k];
            }
            x[i] = s / l[(i, i)];
        }
        x
    }

    /// Solves `L Lᵀ x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        self.solve_upper(&self.solve_lower(b))
    }

    /// `L z` for a vector `z`, the affine map used to draw correlated Gaussians.
    pub fn lower_mul(&self, z: &[T]) -> Vec<T> {
        let l = &self.factor;
        (0..l.nrows())
            .map(|i| dot(&l.row(i)[..=i], &z[..=i]))
            .collect()
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.factor.matmul(&self.factor.transpose())
    }
}
