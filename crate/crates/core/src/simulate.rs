//! Toy data: GP-prior draws on a regular grid and sparse, irregular
//! observation subsets with a minimum index gap.

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernel::KernelParams;
use crate::linalg::{Cholesky, JitterPolicy};
use crate::rng::{seeded, standard_normals};
use crate::scalar::Scalar;

/// Maximum number of random index sets proposed by [`sparsify`].
pub const MAX_SPARSIFY_PROPOSALS: usize = 1_000_000;

/// Regular time grid `t_i = t0 + i·dt`, `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid<T> {
    pub t0: T,
    pub dt: T,
    pub n: usize,
}

impl<T: Scalar> TimeGrid<T> {
    pub fn new(t0: T, dt: T, n: usize) -> Result<Self> {
        if !(dt > T::zero() && dt.is_finite()) {
            return Err(domain("dt", format!("{dt} must be finite and > 0")));
        }
        if !t0.is_finite() {
            return Err(domain("t0", "must be finite"));
        }
        if n < 2 {
            return Err(domain("n", format!("{n} grid points; need at least 2")));
        }
        Ok(Self { t0, dt, n })
    }

    #[inline]
    pub fn time(&self, i: usize) -> T {
        self.t0 + T::of(i as f64) * self.dt
    }

    pub fn times(&self) -> Vec<T> {
        (0..self.n).map(|i| self.time(i)).collect()
    }

    pub fn end(&self) -> T {
        self.time(self.n - 1)
    }

    /// Grid index whose time is within `tol·dt` of `t`.
    pub fn index_of(&self, t: T, tol: T) -> Option<usize> {
        let pos = (t - self.t0) / self.dt;
        let i = pos.round();
        if i < T::zero() || (pos - i).abs() > tol {
            return None;
        }
        let i = i.to_usize()?;
        (i < self.n).then_some(i)
    }
}

/// Free-function form of [`TimeGrid::new`].
pub fn make_grid<T: Scalar>(t0: T, dt: T, n: usize) -> Result<TimeGrid<T>> {
    TimeGrid::new(t0, dt, n)
}

/// Values on a regular grid: a truth series or a GP reconstruction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries<T> {
    pub grid: TimeGrid<T>,
    pub values: Vec<T>,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(grid: TimeGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::LengthMismatch {
                left: grid.n,
                right: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(domain("values", "series contains non-finite values"));
        }
        Ok(Self { grid, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn times(&self) -> Vec<T> {
        self.grid.times()
    }
}

/// Sparse irregular subset of a grid series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observations<T> {
    /// Strictly increasing fine-grid indices.
    pub indices: Vec<usize>,
    pub times: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Scalar> Observations<T> {
    /// Picks `indices` out of `series`.
    pub fn from_indices(series: &TimeSeries<T>, indices: Vec<usize>) -> Result<Self> {
        check_increasing(&indices, series.len())?;
        let times = indices.iter().map(|&i| series.grid.time(i)).collect();
        let values = indices.iter().map(|&i| series.values[i]).collect();
        Ok(Self {
            indices,
            times,
            values,
        })
    }

    /// Maps externally supplied `(t, y)` pairs back onto grid indices.
    pub fn locate(grid: &TimeGrid<T>, times: Vec<T>, values: Vec<T>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: times.len(),
                right: values.len(),
            });
        }
        let indices = times
            .iter()
            .map(|&t| {
                grid.index_of(t, T::of(1e-6))
                    .ok_or_else(|| domain("times", format!("t = {t} is not on the grid")))
            })
            .collect::<Result<Vec<_>>>()?;
        check_increasing(&indices, grid.n)?;
        Ok(Self {
            indices,
            times,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Smallest gap between consecutive indices, `None` for fewer than two points.
    pub fn min_gap(&self) -> Option<usize> {
        self.indices.windows(2).map(|w| w[1] - w[0]).min()
    }
}

fn check_increasing(indices: &[usize], n: usize) -> Result<()> {
    if indices.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("indices", "must be strictly increasing"));
    }
    if indices.last().is_some_and(|&i| i >= n) {
        return Err(domain(
            "indices",
            format!("index beyond grid of {n} points"),
        ));
    }
    Ok(())
}

/// `count` draws `L z + noise_sd · ε` from the GP prior on `grid`, where
/// `L` is the (jittered) Cholesky factor of the kernel matrix.
pub fn sample_gp_prior<T: Scalar>(
    params: &KernelParams<T>,
    grid: &TimeGrid<T>,
    noise_sd: T,
    seed: u64,
    count: usize,
) -> Result<Vec<TimeSeries<T>>> {
    if count == 0 {
        return Err(domain("count", "need at least one draw"));
    }
    if !(noise_sd >= T::zero() && noise_sd.is_finite()) {
        return Err(domain(
            "noise_sd",
            format!("{noise_sd} must be finite and >= 0"),
        ));
    }
    let k = params.gram_1d(&grid.times())?;
    let chol = Cholesky::with_jitter(&k, &JitterPolicy::default())?;
    let mut rng = seeded(seed);
    (0..count)
        .map(|_| {
            let z = standard_normals::<T, _>(&mut rng, grid.n);
            let mut values = chol.lower_mul(&z);
            if noise_sd > T::zero() {
                let eps = standard_normals::<T, _>(&mut rng, grid.n);
                for (v, e) in values.iter_mut().zip(eps) {
                    *v += noise_sd * e;
                }
            }
            TimeSeries::new(*grid, values)
        })
        .collect()
}

/// Independent `N(0, sd²)` values on the grid; a "reconstruction" carrying
/// no information about the observations.
pub fn white_noise<T: Scalar>(grid: &TimeGrid<T>, sd: T, seed: u64) -> Result<TimeSeries<T>> {
    let mut rng = seeded(seed);
    let values = standard_normals::<T, _>(&mut rng, grid.n)
        .into_iter()
        .map(|z| sd * z)
        .collect();
    TimeSeries::new(*grid, values)
}

/// `round(fraction · n)` with ties rounded up.
pub fn observation_count(fraction: f64, n: usize) -> usize {
    (fraction * n as f64 + 0.5).floor() as usize
}

/// Uniformly selects `round_half_up(fraction · n)` grid points whose
/// consecutive indices differ by at least `min_gap`.
///
/// Proposals are uniform `m`-subsets of `0..n`; those violating the gap
/// constraint are rejected, so the accepted set is uniform over all feasible
/// index sets.
pub fn sparsify<T: Scalar>(
    series: &TimeSeries<T>,
    fraction: f64,
    min_gap: usize,
    seed: u64,
) -> Result<Observations<T>> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(domain("fraction", format!("{fraction} outside (0, 1)")));
    }
    if min_gap == 0 {
        return Err(domain("min_gap", "must be at least 1"));
    }
    let n = series.len();
    let m = observation_count(fraction, n);
    let infeasible = |reason: String| Error::InfeasibleSparsity {
        count: m,
        min_gap,
        n,
        reason,
    };
    if m < 2 {
        return Err(infeasible("fewer than two observations".into()));
    }
    if (m - 1) * min_gap > n - 1 {
        return Err(infeasible("gap constraint cannot be met".into()));
    }
    let mut rng = seeded(seed);
    for _ in 0..MAX_SPARSIFY_PROPOSALS {
        let mut picked = index::sample(&mut rng, n, m).into_vec();
        picked.sort_unstable();
        if picked.windows(2).all(|w| w[1] - w[0] >= min_gap) {
            return Observations::from_indices(series, picked);
        }
    }
    Err(infeasible(format!(
        "no valid index set in {MAX_SPARSIFY_PROPOSALS} proposals"
    )))
}
