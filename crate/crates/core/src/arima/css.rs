use super::nelder_mead::{nelder_mead, NelderMeadOptions};
use super::roots::min_root_modulus;
use super::{conditional_residuals, difference, expand_ar, expand_ma, ArimaFit, ArimaOrder};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Root-modulus threshold below which the stationarity/invertibility
/// penalty kicks in.
pub const MIN_ROOT_MODULUS: f64 = 1.001;
pub const ROOT_PENALTY_WEIGHT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CssOptions {
    pub nelder_mead: NelderMeadOptions,
    /// Extra Nelder-Mead runs restarted from the previous optimum.
    pub restarts: usize,
}

impl Default for CssOptions {
    fn default() -> Self {
        Self {
            nelder_mead: NelderMeadOptions {
                max_iters: 5_000,
                x_tol: 1e-8,
                f_tol: 1e-12,
                initial_step: 0.1,
            },
            restarts: 2,
        }
    }
}

struct Layout {
    p: usize,
    q: usize,
    sp: usize,
    sq: usize,
    intercept: bool,
}

impl Layout {
    fn new(order: &ArimaOrder) -> Self {
        Self {
            p: order.p,
            q: order.q,
            sp: order.seasonal_p,
            sq: order.seasonal_q,
            intercept: order.has_intercept(),
        }
    }

    fn len(&self) -> usize {
        self.p + self.q + self.sp + self.sq + usize::from(self.intercept)
    }

    /// (φ, θ, Φ, Θ, μ)
    fn split<'a, T: Scalar>(&self, x: &'a [T]) -> (&'a [T], &'a [T], &'a [T], &'a [T], T) {
        let (ar, rest) = x.split_at(self.p);
        let (ma, rest) = rest.split_at(self.q);
        let (sar, rest) = rest.split_at(self.sp);
        let (sma, rest) = rest.split_at(self.sq);
        let mu = if self.intercept { rest[0] } else { T::zero() };
        (ar, ma, sar, sma, mu)
    }
}

fn root_penalty<T: Scalar>(ar: &[T], ma: &[T], sar: &[T], sma: &[T]) -> f64 {
    let lag_poly =
        |c: &[T], sign: f64| -> Vec<f64> { c.iter().map(|v| sign * v.as_f64()).collect() };
    let min_mod = [
        min_root_modulus(&lag_poly(ar, -1.0)),
        min_root_modulus(&lag_poly(sar, -1.0)),
        min_root_modulus(&lag_poly(ma, 1.0)),
        min_root_modulus(&lag_poly(sma, 1.0)),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    let gap = (MIN_ROOT_MODULUS - min_mod).max(0.0);
    ROOT_PENALTY_WEIGHT * gap * gap
}

/// Conditional sum of squares of `values` under fixed coefficients.
pub fn css_objective<T: Scalar>(
    values: &[T],
    order: ArimaOrder,
    (ar, ma, sar, sma): (&[T], &[T], &[T], &[T]),
    intercept: T,
) -> Result<T> {
    ArimaFit::from_parts(
        order,
        ar.to_vec(),
        ma.to_vec(),
        sar.to_vec(),
        sma.to_vec(),
        intercept,
        values,
    )
    .map(|f| f.css)
}

/// Seasonal ARIMA by conditional sum of squares.
///
/// Differencing is applied first; the CSS of the differenced series plus a
/// smooth penalty on AR/MA roots inside `|z| < 1.001` is minimized with
/// Nelder-Mead from zero coefficients and the sample mean.
pub fn fit_arima_css<T: Scalar>(
    values: &[T],
    order: ArimaOrder,
    opts: &CssOptions,
) -> Result<ArimaFit<T>> {
    let order = order.validate()?;
    let (w, _) = difference(values, order.d, order.seasonal_d, order.period)?;
    let k = order.n_coefficients();
    let mut needed = (8 * k).max(order.ar_lag() + 1);
    if order.has_seasonal_part() {
        needed = needed.max(2 * order.period);
    }
    if w.len() <= needed {
        return Err(Error::SeriesTooShort {
            needed,
            len: w.len(),
        });
    }

    let layout = Layout::new(&order);
    let mean = w.iter().copied().sum::<T>() / T::of(w.len() as f64);
    let mut start = vec![T::zero(); layout.len()];
    if layout.intercept {
        start[layout.len() - 1] = mean;
    }

    let start_idx = order.ar_lag();
    let objective = |x: &[T]| -> T {
        let (ar, ma, sar, sma, mu) = layout.split(x);
        let a = expand_ar(ar, sar, order.period);
        let b = expand_ma(ma, sma, order.period);
        let e = conditional_residuals(&w, &a, &b, mu);
        let css: T = e[start_idx..].iter().map(|&r| r * r).sum();
        css + T::of(root_penalty(ar, ma, sar, sma))
    };

    let mut best = start;
    let mut fx = objective(&best);
    if !fx.is_finite() {
        return Err(Error::OptimizerFailure(
            "objective not finite at start".into(),
        ));
    }
    for _ in 0..=opts.restarts {
        let r = nelder_mead(objective, &best, &opts.nelder_mead)?;
        let improved = r.fx < fx;
        best = r.x;
        fx = r.fx;
        if !improved {
            break;
        }
    }
    if best.iter().any(|v| !v.is_finite()) {
        return Err(Error::OptimizerFailure("non-finite optimum".into()));
    }

    let (ar, ma, sar, sma, mu) = layout.split(&best);
    ArimaFit::from_parts(
        order,
        ar.to_vec(),
        ma.to_vec(),
        sar.to_vec(),
        sma.to_vec(),
        mu,
        values,
    )
}
