//! Yule-Walker AR estimation via the Levinson-Durbin recursion.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Biased sample autocovariances `γ_0..=γ_max_lag` about the sample mean.
pub fn autocovariance<T: Scalar>(values: &[T], max_lag: usize) -> Vec<T> {
    let n = values.len();
    let mean = values.iter().copied().sum::<T>() / T::of(n as f64);
    let centered: Vec<T> = values.iter().map(|&v| v - mean).collect();
    let inv_n = T::one() / T::of(n as f64);
    (0..=max_lag)
        .map(|k| {
            if k >= n {
                return T::zero();
            }
            centered[..n - k]
                .iter()
                .zip(&centered[k..])
                .map(|(&a, &b)| a * b)
                .sum::<T>()
                * inv_n
        })
        .collect()
}

/// Solves the order-`p` Yule-Walker system given `γ_0..=γ_p`.
///
/// Returns `(φ, innovation variance)`.
pub fn yule_walker_from_autocov<T: Scalar>(acov: &[T], p: usize) -> Result<(Vec<T>, T)> {
    assert!(acov.len() > p, "need autocovariances up to lag p");
    let gamma0 = acov[0];
    if !(gamma0 > T::zero()) || !gamma0.is_finite() {
        return Err(Error::SingularToeplitz {
            gamma0: gamma0.as_f64(),
        });
    }
    let mut phi: Vec<T> = Vec::with_capacity(p);
    let mut err = gamma0;
    for k in 1..=p {
        let acc = acov[k]
            - phi
                .iter()
                .enumerate()
                .map(|(j, &f)| f * acov[k - 1 - j])
                .sum::<T>();
        let reflection = acc / err;
        let prev = phi.clone();
        for j in 0..k - 1 {
            phi[j] = prev[j] - reflection * prev[k - 2 - j];
        }
        phi.push(reflection);
        err *= T::one() - reflection * reflection;
        if !(err > T::zero()) {
            return Err(Error::SingularToeplitz {
                gamma0: gamma0.as_f64(),
            });
        }
    }
    Ok((phi, err))
}

/// Yule-Walker estimate of an AR(`p`) on mean-centred `values`.
///
/// Returns `(φ, innovation variance, sample mean)`.
pub fn yule_walker<T: Scalar>(values: &[T], p: usize) -> Result<(Vec<T>, T, T)> {
    let needed = (10 * p).max(1);
    if values.len() <= needed {
        return Err(Error::SeriesTooShort {
            needed,
            len: values.len(),
        });
    }
    let n = T::of(values.len() as f64);
    let mean = values.iter().copied().sum::<T>() / n;
    let mean_sq = values.iter().map(|&v| v * v).sum::<T>() / n;
    let acov = autocovariance(values, p);
    // variance lost in round-off relative to the raw second moment
    if acov[0] <= T::epsilon() * T::of(16.0) * mean_sq {
        return Err(Error::SingularToeplitz {
            gamma0: acov[0].as_f64(),
        });
    }
    let (phi, sigma2) = yule_walker_from_autocov(&acov, p)?;
    Ok((phi, sigma2, mean))
}
