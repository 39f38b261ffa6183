//! Powered-exponential covariance function
//!
//! ```text
//! k(a, b) = σ² · exp(−β · Σ_d (|a_d − b_d| / l_d)^α_d)
//! ```
//!
//! `α_d = 1` gives the Ornstein-Uhlenbeck (exponential) kernel and `α_d = 2`
//! the squared-exponential one. The family is positive semidefinite only for
//! `α_d ∈ (0, 2]`, which [`KernelParams::validate`] enforces.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Hyperparameters of the powered-exponential kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelParams<T> {
    /// Signal variance σ².
    pub sigma2: T,
    /// Scaling factor β applied to the summed distance terms.
    pub beta: T,
    /// Per-dimension length scales `l_d`.
    pub lengthscales: Vec<T>,
    /// Per-dimension roughness exponents `α_d ∈ (0, 2]`.
    pub exponents: Vec<T>,
}

impl<T: Scalar> KernelParams<T> {
    /// Builds and validates parameters.
    pub fn new(sigma2: T, beta: T, lengthscales: Vec<T>, exponents: Vec<T>) -> Result<Self> {
        Self {
            sigma2,
            beta,
            lengthscales,
            exponents,
        }
        .validate()
    }

    /// One-dimensional (time-only) parameters.
    pub fn univariate(sigma2: T, beta: T, lengthscale: T, exponent: T) -> Result<Self> {
        Self::new(sigma2, beta, vec![lengthscale], vec![exponent])
    }

    /// Ornstein-Uhlenbeck process: (σ², β, l, α) = (1, 1, 2, 1).
    pub fn ornstein_uhlenbeck() -> Self {
        Self::univariate(T::one(), T::one(), T::of(2.0), T::one()).expect("valid constants")
    }

    /// Fractional process: (σ², β, l, α) = (1, 1, 2, 1.3).
    pub fn fractional() -> Self {
        Self::univariate(T::one(), T::one(), T::of(2.0), T::of(1.3)).expect("valid constants")
    }

    /// Checks every invariant and hands the parameters back unchanged.
    pub fn validate(self) -> Result<Self> {
        positive_finite("sigma2", self.sigma2)?;
        positive_finite("beta", self.beta)?;
        if self.lengthscales.is_empty() {
            return Err(domain("lengthscales", "need at least one dimension"));
        }
        if self.lengthscales.len() != self.exponents.len() {
            return Err(domain(
                "exponents",
                format!(
                    "{} exponents for {} length scales",
                    self.exponents.len(),
                    self.lengthscales.len()
                ),
            ));
        }
        for &l in &self.lengthscales {
            positive_finite("lengthscales", l)?;
        }
        for &a in &self.exponents {
            if !(a > T::zero() && a <= T::of(2.0)) {
                return Err(domain(
                    "exponents",
                    format!("{a} outside (0, 2]; kernel would not be positive semidefinite"),
                ));
            }
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.lengthscales.len()
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            })
        }
    }

    /// Kernel value between two points of dimension `d`.
    pub fn value(&self, a: &[T], b: &[T]) -> Result<T> {
        self.check_dim(a.len())?;
        self.check_dim(b.len())?;
        Ok(self.value_unchecked(a, b))
    }

    #[inline]
    fn value_unchecked(&self, a: &[T], b: &[T]) -> T {
        let mut s = T::zero();
        for k in 0..a.len() {
            let r = (a[k] - b[k]).abs() / self.lengthscales[k];
            s += pow(r, self.exponents[k]);
        }
        self.sigma2 * (-self.beta * s).exp()
    }

    /// Kernel value between two scalar times (d = 1).
    #[inline]
    pub fn value_1d(&self, a: T, b: T) -> T {
        debug_assert_eq!(self.dim(), 1);
        let r = (a - b).abs() / self.lengthscales[0];
        self.sigma2 * (-self.beta * pow(r, self.exponents[0])).exp()
    }

    /// Dense kernel matrix between two point sets.
    pub fn matrix<P: AsRef<[T]>>(&self, rows: &[P], cols: &[P]) -> Result<Matrix<T>> {
        for p in rows.iter().chain(cols) {
            self.check_dim(p.as_ref().len())?;
        }
        Ok(Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.value_unchecked(rows[i].as_ref(), cols[j].as_ref())
        }))
    }

    /// Dense kernel matrix between two sets of times (d = 1).
    pub fn matrix_1d(&self, rows: &[T], cols: &[T]) -> Result<Matrix<T>> {
        self.check_dim(1)?;
        Ok(Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.value_1d(rows[i], cols[j])
        }))
    }

    /// Symmetric kernel matrix of a time set with itself; fills one triangle
    /// and mirrors it so the result is exactly symmetric.
    pub fn gram_1d(&self, times: &[T]) -> Result<Matrix<T>> {
        self.check_dim(1)?;
        let n = times.len();
        let mut k = Matrix::zeros(n, n);
        for i in 0..n {
            k[(i, i)] = self.sigma2;
            for j in 0..i {
                let v = self.value_1d(times[i], times[j]);
                k[(i, j)] = v;
                k[(j, i)] = v;
            }
        }
        Ok(k)
    }
}

// x^1 and x^2 are common enough to skip `powf`; also keeps 0^α = 0 exact.
#[inline]
fn pow<T: Scalar>(r: T, alpha: T) -> T {
    if alpha == T::one() {
        r
    } else if alpha == T::of(2.0) {
        r * r
    } else if r == T::zero() {
        T::zero()
    } else {
        r.powf(alpha)
    }
}

fn positive_finite<T: Scalar>(field: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(domain(field, format!("{v} must be finite and > 0")))
    }
}

/// Free-function form of [`KernelParams::validate`].
pub fn validate_params<T: Scalar>(params: KernelParams<T>) -> Result<KernelParams<T>> {
    params.validate()
}

/// Free-function form of [`KernelParams::value`].
pub fn kernel_value<T: Scalar>(params: &KernelParams<T>, a: &[T], b: &[T]) -> Result<T> {
    params.value(a, b)
}

/// Free-function form of [`KernelParams::matrix`].
pub fn kernel_matrix<T: Scalar, P: AsRef<[T]>>(
    params: &KernelParams<T>,
    rows: &[P],
    cols: &[P],
) -> Result<Matrix<T>> {
    params.matrix(rows, cols)
}
