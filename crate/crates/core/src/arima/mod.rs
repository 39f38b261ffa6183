//! Secondary forecasting models: pure AR via Yule-Walker and seasonal
//! ARIMA(p,d,q)(P,D,Q)_s via conditional sum of squares.
//!
//! Lag-polynomial convention (after differencing to `w_t`, mean `μ`):
//!
//! ```text
//! φ(B) Φ(B^s) (w_t − μ) = θ(B) Θ(B^s) e_t
//! φ(B) = 1 − φ_1 B − … − φ_p B^p        θ(B) = 1 + θ_1 B + … + θ_q B^q
//! ```

mod css;
mod difference;
mod nelder_mead;
mod roots;
mod yule_walker;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;

pub use css::{css_objective, fit_arima_css, CssOptions};
pub use difference::{difference, undifference, DifferenceState};
pub use nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use roots::min_root_modulus;
pub use yule_walker::{autocovariance, yule_walker, yule_walker_from_autocov};

/// Model orders of a seasonal ARIMA(p,d,q)(P,D,Q)_s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub seasonal_p: usize,
    pub seasonal_d: usize,
    pub seasonal_q: usize,
    /// Seasonal period in grid steps.
    pub period: usize,
}

impl ArimaOrder {
    pub fn new(
        (p, d, q): (usize, usize, usize),
        (seasonal_p, seasonal_d, seasonal_q): (usize, usize, usize),
        period: usize,
    ) -> Result<Self> {
        Self {
            p,
            d,
            q,
            seasonal_p,
            seasonal_d,
            seasonal_q,
            period,
        }
        .validate()
    }

    /// Non-seasonal ARIMA(p,d,q).
    pub fn arima(p: usize, d: usize, q: usize) -> Self {
        Self {
            p,
            d,
            q,
            seasonal_p: 0,
            seasonal_d: 0,
            seasonal_q: 0,
            period: 1,
        }
    }

    /// Pure AR(p).
    pub fn ar(p: usize) -> Self {
        Self::arima(p, 0, 0)
    }

    pub fn validate(self) -> Result<Self> {
        if self.period == 0 {
            return Err(domain("period", "must be >= 1"));
        }
        if self.has_seasonal_part() && self.period < 2 {
            return Err(domain("period", "seasonal terms need a period > 1"));
        }
        Ok(self)
    }

    pub fn has_seasonal_part(&self) -> bool {
        self.seasonal_p + self.seasonal_d + self.seasonal_q > 0
    }

    pub fn is_pure_ar(&self) -> bool {
        self.d == 0 && self.q == 0 && !self.has_seasonal_part()
    }

    /// Number of ARMA coefficients (intercept excluded).
    pub fn n_coefficients(&self) -> usize {
        self.p + self.q + self.seasonal_p + self.seasonal_q
    }

    /// Highest lag of the expanded AR polynomial.
    pub fn ar_lag(&self) -> usize {
        self.p + self.period * self.seasonal_p
    }

    pub fn ma_lag(&self) -> usize {
        self.q + self.period * self.seasonal_q
    }

    /// An intercept (process mean) is estimated only without differencing.
    pub fn has_intercept(&self) -> bool {
        self.d + self.seasonal_d == 0
    }
}

impl std::fmt::Display for ArimaOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ARIMA({},{},{})", self.p, self.d, self.q)?;
        if self.has_seasonal_part() {
            write!(
                f,
                "({},{},{})_{}",
                self.seasonal_p, self.seasonal_d, self.seasonal_q, self.period
            )?;
        }
        Ok(())
    }
}

/// State needed to forecast beyond the end of the fitted series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastTail<T> {
    /// Last `ar_lag` differenced values, oldest first.
    pub values: Vec<T>,
    /// Last `ma_lag` residuals, oldest first.
    pub residuals: Vec<T>,
    pub differencing: DifferenceState<T>,
}

/// Estimated model, immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArimaFit<T> {
    pub order: ArimaOrder,
    pub ar: Vec<T>,
    pub ma: Vec<T>,
    pub sar: Vec<T>,
    pub sma: Vec<T>,
    /// Mean of the differenced series; zero whenever differencing is applied.
    pub intercept: T,
    /// Conditional sum of squared one-step residuals.
    pub css: T,
    /// Number of residuals entering `css`.
    pub n_effective: usize,
    /// `css / n_effective`.
    pub sigma2_resid: T,
    #[serde(skip)]
    pub tail: ForecastTail<T>,
}

/// Coefficients of `1 − Σ a_i B^i = φ(B) Φ(B^s)`, returned as `a_1..`.
pub(crate) fn expand_ar<T: Scalar>(ar: &[T], sar: &[T], period: usize) -> Vec<T> {
    let regular: Vec<T> = std::iter::once(T::one())
        .chain(ar.iter().map(|&c| -c))
        .collect();
    let seasonal = seasonal_poly(sar, period, true);
    let prod = poly_mul(&regular, &seasonal);
    prod[1..].iter().map(|&c| -c).collect()
}

/// Coefficients of `1 + Σ b_j B^j = θ(B) Θ(B^s)`, returned as `b_1..`.
pub(crate) fn expand_ma<T: Scalar>(ma: &[T], sma: &[T], period: usize) -> Vec<T> {
    let regular: Vec<T> = std::iter::once(T::one())
        .chain(ma.iter().copied())
        .collect();
    let seasonal = seasonal_poly(sma, period, false);
    poly_mul(&regular, &seasonal)[1..].to_vec()
}

fn seasonal_poly<T: Scalar>(coeffs: &[T], period: usize, negate: bool) -> Vec<T> {
    let mut poly = vec![T::zero(); coeffs.len() * period + 1];
    poly[0] = T::one();
    for (k, &c) in coeffs.iter().enumerate() {
        poly[(k + 1) * period] = if negate { -c } else { c };
    }
    poly
}

fn poly_mul<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Conditional one-step residuals of the differenced series `w`.
///
/// Residuals before the expanded AR lag are zero and excluded from the sum.
pub(crate) fn conditional_residuals<T: Scalar>(w: &[T], a: &[T], b: &[T], mu: T) -> Vec<T> {
    let start = a.len();
    let mut e = vec![T::zero(); w.len()];
    for t in start..w.len() {
        let mut pred = mu;
        for (i, &ai) in a.iter().enumerate() {
            pred += ai * (w[t - 1 - i] - mu);
        }
        for (j, &bj) in b.iter().enumerate() {
            if t > j {
                pred += bj * e[t - 1 - j];
            }
        }
        e[t] = w[t] - pred;
    }
    e
}

impl<T: Scalar> ArimaFit<T> {
    /// Assembles a fit from known coefficients, computing residuals and the
    /// forecasting tail on `values` (the raw, undifferenced series).
    pub fn from_parts(
        order: ArimaOrder,
        ar: Vec<T>,
        ma: Vec<T>,
        sar: Vec<T>,
        sma: Vec<T>,
        intercept: T,
        values: &[T],
    ) -> Result<Self> {
        let order = order.validate()?;
        let lens = [
            (ar.len(), order.p),
            (ma.len(), order.q),
            (sar.len(), order.seasonal_p),
            (sma.len(), order.seasonal_q),
        ];
        for (found, expected) in lens {
            if found != expected {
                return Err(Error::DimensionMismatch { expected, found });
            }
        }
        let intercept = if order.has_intercept() {
            intercept
        } else {
            T::zero()
        };
        let (w, differencing) = difference(values, order.d, order.seasonal_d, order.period)?;
        let a = expand_ar(&ar, &sar, order.period);
        let b = expand_ma(&ma, &sma, order.period);
        if w.len() <= a.len() {
            return Err(Error::SeriesTooShort {
                needed: a.len() + order.d + order.period * order.seasonal_d,
                len: values.len(),
            });
        }
        let e = conditional_residuals(&w, &a, &b, intercept);
        let n_effective = w.len() - a.len();
        let css: T = e[a.len()..].iter().map(|&r| r * r).sum();
        let tail = ForecastTail {
            values: w[w.len() - a.len()..].to_vec(),
            residuals: e[e.len().saturating_sub(b.len())..].to_vec(),
            differencing,
        };
        Ok(Self {
            order,
            ar,
            ma,
            sar,
            sma,
            intercept,
            css,
            n_effective,
            sigma2_resid: css / T::of(n_effective as f64),
            tail,
        })
    }

    /// Expanded AR coefficients `a_1..a_{p+sP}`.
    pub fn ar_polynomial(&self) -> Vec<T> {
        expand_ar(&self.ar, &self.sar, self.order.period)
    }

    /// Expanded MA coefficients `b_1..b_{q+sQ}`.
    pub fn ma_polynomial(&self) -> Vec<T> {
        expand_ma(&self.ma, &self.sma, self.order.period)
    }

    /// One-step prediction of the next differenced value from the tail.
    pub fn one_step_differenced(&self) -> T {
        let a = self.ar_polynomial();
        let b = self.ma_polynomial();
        let mu = self.intercept;
        let vals = &self.tail.values;
        let res = &self.tail.residuals;
        let mut pred = mu;
        for (i, &ai) in a.iter().enumerate() {
            pred += ai * (vals[vals.len() - 1 - i] - mu);
        }
        for (j, &bj) in b.iter().enumerate() {
            if j < res.len() {
                pred += bj * res[res.len() - 1 - j];
            }
        }
        pred
    }

    /// `h` forecasts on the original scale; future shocks are set to zero.
    pub fn forecast(&self, h: usize) -> Result<Vec<T>> {
        if h == 0 {
            return Err(domain("horizon", "must be >= 1"));
        }
        let a = self.ar_polynomial();
        let b = self.ma_polynomial();
        let mu = self.intercept;
        let mut vals = self.tail.values.clone();
        let mut res = self.tail.residuals.clone();
        let mut out = Vec::with_capacity(h);
        for _ in 0..h {
            let mut pred = mu;
            for (i, &ai) in a.iter().enumerate() {
                pred += ai * (vals[vals.len() - 1 - i] - mu);
            }
            for (j, &bj) in b.iter().enumerate() {
                if j < res.len() {
                    pred += bj * res[res.len() - 1 - j];
                }
            }
            vals.push(pred);
            res.push(T::zero());
            out.push(pred);
        }
        Ok(undifference(&out, &self.tail.differencing))
    }
}

/// Pure AR(`p`) fitted by Yule-Walker on the mean-centred series.
pub fn fit_ar_yule_walker<T: Scalar>(values: &[T], p: usize) -> Result<ArimaFit<T>> {
    let (phi, _, mean) = yule_walker(values, p)?;
    ArimaFit::from_parts(ArimaOrder::ar(p), phi, vec![], vec![], vec![], mean, values)
}

/// Free-function form of [`ArimaFit::forecast`].
pub fn forecast<T: Scalar>(fit: &ArimaFit<T>, h: usize) -> Result<Vec<T>> {
    fit.forecast(h)
}
