//! Gaussian-process regression on one-dimensional (time) inputs.
//!
//! With `K = K_xx + σ_n² I` factored as `L Lᵀ`, the posterior at query times
//! `x*` is
//!
//! ```text
//! mean = K_*x K⁻¹ y
//! cov  = K_** − K_*x K⁻¹ K_x*
//! ```
//!
//! No inverse is ever formed; every solve goes through `L`.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::kernel::KernelParams;
use crate::linalg::{Cholesky, JitterPolicy, Matrix};
use crate::rng::{seeded, standard_normals};
use crate::scalar::Scalar;
use crate::simulate::Observations;

/// Factor a symmetric PSD matrix, escalating jitter per `policy`.
pub fn cholesky_psd<T: Scalar>(matrix: &Matrix<T>, policy: &JitterPolicy) -> Result<Cholesky<T>> {
    Cholesky::with_jitter(matrix, policy)
}

/// Fitted GP; immutable once built.
#[derive(Debug, Clone)]
pub struct GpPosterior<T> {
    params: KernelParams<T>,
    noise2: T,
    train_times: Vec<T>,
    train_values: Vec<T>,
    chol: Option<Cholesky<T>>,
    weights: Vec<T>,
}

/// Posterior covariance at a set of query times.
#[derive(Debug, Clone)]
pub struct PosteriorCov<T> {
    pub matrix: Matrix<T>,
}

impl<T: Scalar> PosteriorCov<T> {
    /// Raw diagonal, possibly with tiny negative round-off.
    pub fn raw_variance(&self) -> Vec<T> {
        self.matrix.diagonal()
    }

    /// Diagonal with round-off negatives clamped to zero, for reporting.
    pub fn variance(&self) -> Vec<T> {
        self.raw_variance()
            .into_iter()
            .map(|v| v.max(T::zero()))
            .collect()
    }
}

impl<T: Scalar> GpPosterior<T> {
    /// Conditions the prior on `obs` with observation-noise variance `noise2`.
    pub fn fit(obs: &Observations<T>, params: &KernelParams<T>, noise2: T) -> Result<Self> {
        Self::fit_points(&obs.times, &obs.values, params, noise2)
    }

    /// Like [`GpPosterior::fit`] but from bare `(t, y)` columns.
    pub fn fit_points(
        times: &[T],
        values: &[T],
        params: &KernelParams<T>,
        noise2: T,
    ) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::EmptyObservations);
        }
        if times.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: times.len(),
                right: values.len(),
            });
        }
        if !(noise2 >= T::zero() && noise2.is_finite()) {
            return Err(domain(
                "noise2",
                format!("{noise2} must be finite and >= 0"),
            ));
        }
        let params = params.clone().validate()?;
        let mut k = params.gram_1d(times)?;
        k.add_diagonal(noise2);
        let chol = cholesky_psd(&k, &JitterPolicy::default())?;
        let weights = chol.solve(values);
        Ok(Self {
            params,
            noise2,
            train_times: times.to_vec(),
            train_values: values.to_vec(),
            chol: Some(chol),
            weights,
        })
    }

    /// The unconditioned prior, i.e. the no-data limit.
    pub fn prior(params: &KernelParams<T>) -> Result<Self> {
        Ok(Self {
            params: params.clone().validate()?,
            noise2: T::zero(),
            train_times: Vec::new(),
            train_values: Vec::new(),
            chol: None,
            weights: Vec::new(),
        })
    }

    pub fn params(&self) -> &KernelParams<T> {
        &self.params
    }

    pub fn noise2(&self) -> T {
        self.noise2
    }

    pub fn train_times(&self) -> &[T] {
        &self.train_times
    }

    pub fn train_values(&self) -> &[T] {
        &self.train_values
    }

    /// Lower Cholesky factor of `K_xx + noise2·I + jitter·I`.
    pub fn cholesky(&self) -> Option<&Cholesky<T>> {
        self.chol.as_ref()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    fn cross(&self, times: &[T]) -> Matrix<T> {
        Matrix::from_fn(times.len(), self.train_times.len(), |i, j| {
            self.params.value_1d(times[i], self.train_times[j])
        })
    }

    /// Posterior mean `K_*x · weights`.
    pub fn predict_mean(&self, times: &[T]) -> Result<Vec<T>> {
        check_finite(times)?;
        if self.chol.is_none() {
            return Ok(vec![T::zero(); times.len()]);
        }
        Ok(self.cross(times).matvec(&self.weights))
    }

    /// Posterior covariance `K_** − Vᵀ V` with `V = L⁻¹ K_x*`.
    pub fn predict_cov(&self, times: &[T]) -> Result<PosteriorCov<T>> {
        check_finite(times)?;
        let q = times.len();
        let mut cov = self.params.gram_1d(times)?;
        if let Some(chol) = &self.chol {
            let cross = self.cross(times);
            // columns of V, one per query point
            let v: Vec<Vec<T>> = (0..q).map(|i| chol.solve_lower(cross.row(i))).collect();
            for i in 0..q {
                for j in 0..=i {
                    let reduction: T = v[i].iter().zip(&v[j]).map(|(&a, &b)| a * b).sum();
                    let c = cov[(i, j)] - reduction;
                    cov[(i, j)] = c;
                    cov[(j, i)] = c;
                }
            }
        }
        Ok(PosteriorCov { matrix: cov })
    }

    /// Pointwise posterior mean and clamped variance.
    pub fn predict(&self, times: &[T]) -> Result<(Vec<T>, Vec<T>)> {
        Ok((
            self.predict_mean(times)?,
            self.predict_cov(times)?.variance(),
        ))
    }

    /// `count` posterior sample paths `mean + L_cov z` at `times`.
    pub fn sample_posterior(&self, times: &[T], count: usize, seed: u64) -> Result<Vec<Vec<T>>> {
        if count == 0 {
            return Err(domain("count", "need at least one draw"));
        }
        let mean = self.predict_mean(times)?;
        let cov = self.predict_cov(times)?;
        let chol = cholesky_psd(&cov.matrix, &JitterPolicy::default())?;
        let mut rng = seeded(seed);
        Ok((0..count)
            .map(|_| {
                let z = standard_normals::<T, _>(&mut rng, times.len());
                chol.lower_mul(&z)
                    .into_iter()
                    .zip(&mean)
                    .map(|(d, &m)| m + d)
                    .collect()
            })
            .collect())
    }
}

fn check_finite<T: Scalar>(times: &[T]) -> Result<()> {
    if times.iter().all(|t| t.is_finite()) {
        Ok(())
    } else {
        Err(domain("times", "query times must be finite"))
    }
}

/// Free-function form of [`GpPosterior::fit`].
pub fn fit<T: Scalar>(
    obs: &Observations<T>,
    params: &KernelParams<T>,
    noise2: T,
) -> Result<GpPosterior<T>> {
    GpPosterior::fit(obs, params, noise2)
}

/// Mean, variance and sample paths on a query set; the shape of a
/// reconstruction export.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconstruction<T> {
    pub times: Vec<T>,
    pub mean: Vec<T>,
    pub variance: Vec<T>,
    pub draws: Vec<Vec<T>>,
}

impl<T: Scalar> GpPosterior<T> {
    pub fn reconstruct(&self, times: &[T], draws: usize, seed: u64) -> Result<Reconstruction<T>> {
        let (mean, variance) = self.predict(times)?;
        let draws = if draws == 0 {
            Vec::new()
        } else {
            self.sample_posterior(times, draws, seed)?
        };
        Ok(Reconstruction {
            times: times.to_vec(),
            mean,
            variance,
            draws,
        })
    }
}
