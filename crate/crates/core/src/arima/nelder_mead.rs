//! Derivative-free Nelder-Mead simplex minimizer.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iters: usize,
    /// Stop once every vertex lies within `x_tol` (max-norm) of the best one.
    pub x_tol: f64,
    /// Stop once the objective spread over the simplex is below `f_tol`.
    pub f_tol: f64,
    /// Edge length of the initial simplex, scaled by `max(1, |x0_i|)`.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iters: 10_000,
            x_tol: 1e-10,
            f_tol: 1e-16,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult<T> {
    pub x: Vec<T>,
    pub fx: T,
    pub iters: usize,
    pub evals: usize,
    pub converged: bool,
}

/// Minimizes `objective` starting from `start`.
///
/// Non-finite objective values away from the start are treated as `+∞`, so
/// the simplex simply moves away from them. The returned point is never
/// worse than `start`.
pub fn nelder_mead<T, F>(
    mut objective: F,
    start: &[T],
    opts: &NelderMeadOptions,
) -> Result<NelderMeadResult<T>>
where
    T: Scalar,
    F: FnMut(&[T]) -> T,
{
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let n = start.len();
    let f0 = objective(start);
    if !f0.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    if n == 0 {
        return Ok(NelderMeadResult {
            x: Vec::new(),
            fx: f0,
            iters: 0,
            evals: 1,
            converged: true,
        });
    }
    let mut evals = 1usize;
    let mut eval = |x: &[T], evals: &mut usize| {
        *evals += 1;
        let v = objective(x);
        if v.is_finite() {
            v
        } else {
            T::infinity()
        }
    };

    let mut simplex: Vec<Vec<T>> = vec![start.to_vec()];
    let mut values = vec![f0];
    for i in 0..n {
        let mut v = start.to_vec();
        let step = T::of(opts.initial_step) * v[i].abs().max(T::one());
        v[i] += step;
        values.push(eval(&v, &mut evals));
        simplex.push(v);
    }

    let lerp = |a: &[T], b: &[T], t: T| -> Vec<T> {
        a.iter().zip(b).map(|(&x, &y)| x + t * (y - x)).collect()
    };

    let mut iters = 0;
    let mut converged = false;
    while iters < opts.max_iters {
        // order vertices best to worst; stable sort keeps the start on ties
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("no NaN"));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(&a, &b)| (a - b).abs()))
            .fold(T::zero(), T::max);
        if diameter < T::of(opts.x_tol) || spread < T::of(opts.f_tol) {
            converged = true;
            break;
        }
        iters += 1;

        let inv_n = T::one() / T::of(n as f64);
        let centroid: Vec<T> = (0..n)
            .map(|k| simplex[..n].iter().map(|v| v[k]).sum::<T>() * inv_n)
            .collect();
        let worst = simplex[n].clone();

        let reflected = lerp(&centroid, &worst, T::of(-REFLECT));
        let f_r = eval(&reflected, &mut evals);
        if f_r < values[0] {
            let expanded = lerp(&centroid, &worst, T::of(-EXPAND));
            let f_e = eval(&expanded, &mut evals);
            if f_e < f_r {
                simplex[n] = expanded;
                values[n] = f_e;
            } else {
                simplex[n] = reflected;
                values[n] = f_r;
            }
            continue;
        }
        if f_r < values[n - 1] {
            simplex[n] = reflected;
            values[n] = f_r;
            continue;
        }
        // contraction: outside if the reflection improved on the worst
        let (candidate, f_c) = if f_r < values[n] {
            let c = lerp(&centroid, &reflected, T::of(CONTRACT));
            let f = eval(&c, &mut evals);
            (c, f)
        } else {
            let c = lerp(&centroid, &worst, T::of(CONTRACT));
            let f = eval(&c, &mut evals);
            (c, f)
        };
        if f_c < values[n].min(f_r) {
            simplex[n] = candidate;
            values[n] = f_c;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            simplex[i] = lerp(&best, &simplex[i], T::of(SHRINK));
            values[i] = eval(&simplex[i], &mut evals);
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("no NaN"))
        .expect("non-empty simplex");
    Ok(NelderMeadResult {
        x: simplex[best].clone(),
        fx: values[best],
        iters,
        evals,
        converged,
    })
}
