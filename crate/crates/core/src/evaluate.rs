//! MAPE-AR: score a GP reconstruction by rolling secondary-model forecasts
//! at the observed points.
//!
//! For every observation `k ≥ 2` (1-based) at fine-grid index `j_k`, a
//! secondary model is fitted on the reconstruction prefix `[0, j_k − h]` and
//! its `h`-step forecast, which lands exactly on `j_k`, is compared with the
//! observed `y_k`. The mean absolute percent error of those forecasts is the
//! score `M`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arima::{fit_ar_yule_walker, fit_arima_css, ArimaOrder, CssOptions};
use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;
use crate::simulate::{Observations, TimeSeries};

/// Default division guard for near-zero observations.
pub const DEFAULT_EPSILON: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// AR(p) by Yule-Walker.
    PureAr,
    /// Seasonal ARIMA by conditional sum of squares.
    SeasonalArima,
}

/// Forecast used when the secondary model cannot be fitted on a prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fallback {
    #[default]
    NaiveLastValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondaryModelSpec {
    pub kind: ModelKind,
    pub order: ArimaOrder,
    pub fallback: Fallback,
}

impl SecondaryModelSpec {
    pub fn pure_ar(p: usize) -> Self {
        Self {
            kind: ModelKind::PureAr,
            order: ArimaOrder::ar(p),
            fallback: Fallback::NaiveLastValue,
        }
    }

    pub fn seasonal_arima(order: ArimaOrder) -> Self {
        Self {
            kind: ModelKind::SeasonalArima,
            order,
            fallback: Fallback::NaiveLastValue,
        }
    }

    pub fn validate(self) -> Result<Self> {
        self.order.validate()?;
        if self.kind == ModelKind::PureAr && !self.order.is_pure_ar() {
            return Err(domain(
                "order",
                format!("{} is not a pure AR order", self.order),
            ));
        }
        Ok(self)
    }

    /// `h`-step forecast from `prefix`; the model error is returned so the
    /// caller can decide on a fallback.
    fn forecast<T: Scalar>(&self, prefix: &[T], h: usize) -> Result<T> {
        let fit = match self.kind {
            ModelKind::PureAr => fit_ar_yule_walker(prefix, self.order.p)?,
            ModelKind::SeasonalArima => fit_arima_css(prefix, self.order, &CssOptions::default())?,
        };
        let path = fit.forecast(h)?;
        let last = path[h - 1];
        if last.is_finite() {
            Ok(last)
        } else {
            Err(Error::OptimizerFailure("non-finite forecast".into()))
        }
    }

    fn fallback_forecast<T: Scalar>(&self, prefix: &[T]) -> T {
        match self.fallback {
            Fallback::NaiveLastValue => *prefix.last().expect("non-empty prefix"),
        }
    }
}

impl std::fmt::Display for SecondaryModelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            ModelKind::PureAr => write!(f, "ar:{}", self.order.p),
            ModelKind::SeasonalArima => {
                let o = self.order;
                write!(
                    f,
                    "sarima:{},{},{},{},{},{},{}",
                    o.p, o.d, o.q, o.seasonal_p, o.seasonal_d, o.seasonal_q, o.period
                )
            }
        }
    }
}

impl std::str::FromStr for SecondaryModelSpec {
    type Err = Error;

    /// Parses `ar:p` or `sarima:p,d,q,P,D,Q,s`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Validation {
            field: "secondary".into(),
            message: msg,
        };
        let (kind, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| bad(format!("`{s}`: expected `ar:p` or `sarima:p,d,q,P,D,Q,s`")))?;
        let nums = rest
            .split(',')
            .map(|v| v.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("`{s}`: {e}")))?;
        let spec = match (kind.trim(), nums.as_slice()) {
            ("ar", &[p]) => Self::pure_ar(p),
            ("sarima", &[p, d, q, sp, sd, sq, period]) => Self::seasonal_arima(ArimaOrder {
                p,
                d,
                q,
                seasonal_p: sp,
                seasonal_d: sd,
                seasonal_q: sq,
                period,
            }),
            _ => {
                return Err(bad(format!(
                    "`{s}`: expected `ar:p` or `sarima:p,d,q,P,D,Q,s`"
                )))
            }
        };
        spec.validate().map_err(|e| bad(e.to_string()))
    }
}

/// Absolute (`|y − ŷ| / |y|`) or signed (`(y − ŷ) / y`) percent error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorMode {
    #[default]
    Absolute,
    Signed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub horizon: usize,
    pub epsilon: f64,
    pub mode: ErrorMode,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            horizon: 1,
            epsilon: DEFAULT_EPSILON,
            mode: ErrorMode::Absolute,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointEval<T> {
    /// 1-based observation number.
    pub k: usize,
    pub grid_index: usize,
    pub time: T,
    pub observed: T,
    pub forecast: T,
    /// Absolute (or signed) percent error, as a fraction.
    pub ape: T,
    pub fallback_used: bool,
    /// `|y_k|` was below epsilon and the guard was used as denominator.
    pub guarded: bool,
    /// Why the secondary model was replaced by the fallback.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback_reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedPoint {
    pub k: usize,
    pub grid_index: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport<T> {
    pub horizon: usize,
    pub secondary: String,
    pub mode: ErrorMode,
    pub epsilon: f64,
    pub per_point: Vec<PointEval<T>>,
    pub skipped: Vec<SkippedPoint>,
    pub mape_ar: T,
}

impl<T: Scalar> EvalReport<T> {
    pub fn n_points(&self) -> usize {
        self.per_point.len()
    }

    pub fn n_fallback(&self) -> usize {
        self.per_point.iter().filter(|p| p.fallback_used).count()
    }

    /// Forecasts in observation order.
    pub fn forecasts(&self) -> Vec<T> {
        self.per_point.iter().map(|p| p.forecast).collect()
    }
}

fn percent_error<T: Scalar>(actual: T, predicted: T, epsilon: T, mode: ErrorMode) -> (T, bool) {
    let guarded = actual.abs() < epsilon;
    match mode {
        ErrorMode::Absolute => (
            (actual - predicted).abs() / actual.abs().max(epsilon),
            guarded,
        ),
        ErrorMode::Signed => {
            let denom = if guarded {
                epsilon.copysign(actual)
            } else {
                actual
            };
            ((actual - predicted) / denom, guarded)
        }
    }
}

/// Mean of `|a_i − p_i| / max(|a_i|, epsilon)`.
pub fn mape<T: Scalar>(actual: &[T], predicted: &[T], epsilon: T) -> Result<T> {
    mean_percent_error(actual, predicted, epsilon, ErrorMode::Absolute)
}

/// [`mape`] generalized to the signed variant.
pub fn mean_percent_error<T: Scalar>(
    actual: &[T],
    predicted: &[T],
    epsilon: T,
    mode: ErrorMode,
) -> Result<T> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(domain("actual", "need at least one value"));
    }
    let total: T = actual
        .iter()
        .zip(predicted)
        .map(|(&a, &p)| percent_error(a, p, epsilon, mode).0)
        .sum();
    Ok(total / T::of(actual.len() as f64))
}

/// Runs the rolling secondary-model evaluation of `reconstruction` against
/// the observed values.
pub fn mape_ar<T: Scalar>(
    reconstruction: &TimeSeries<T>,
    obs: &Observations<T>,
    spec: &SecondaryModelSpec,
    opts: &EvalOptions,
) -> Result<EvalReport<T>> {
    let spec = spec.validate()?;
    let h = opts.horizon;
    if h == 0 {
        return Err(domain("horizon", "must be >= 1"));
    }
    if !(opts.epsilon > 0.0) {
        return Err(domain("epsilon", "must be > 0"));
    }
    if let Some(&last) = obs.indices.last() {
        if last >= reconstruction.len() {
            return Err(domain(
                "indices",
                "observation beyond the reconstruction grid",
            ));
        }
    }
    let epsilon = T::of(opts.epsilon);

    enum Outcome<T> {
        Point(PointEval<T>),
        Skipped(SkippedPoint),
    }

    let outcomes: Vec<Outcome<T>> = (1..obs.len())
        .into_par_iter()
        .map(|j| {
            let k = j + 1;
            let grid_index = obs.indices[j];
            if grid_index < h {
                return Outcome::Skipped(SkippedPoint {
                    k,
                    grid_index,
                    reason: format!(
                        "no reconstruction prefix ends {h} steps before grid index {grid_index}"
                    ),
                });
            }
            let prefix = &reconstruction.values[..=grid_index - h];
            let (forecast, fallback_reason) = match spec.forecast(prefix, h) {
                Ok(f) => (f, None),
                Err(e) => (spec.fallback_forecast(prefix), Some(e.to_string())),
            };
            let observed = obs.values[j];
            let (ape, guarded) = percent_error(observed, forecast, epsilon, opts.mode);
            Outcome::Point(PointEval {
                k,
                grid_index,
                time: obs.times[j],
                observed,
                forecast,
                ape,
                fallback_used: fallback_reason.is_some(),
                guarded,
                fallback_reason,
            })
        })
        .collect();

    let mut per_point = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Point(p) => per_point.push(p),
            Outcome::Skipped(s) => skipped.push(s),
        }
    }
    if per_point.is_empty() {
        return Err(Error::NoEvaluablePoints {
            skipped: skipped.len(),
        });
    }
    let mape_ar = per_point.iter().map(|p| p.ape).sum::<T>() / T::of(per_point.len() as f64);
    Ok(EvalReport {
        horizon: h,
        secondary: spec.to_string(),
        mode: opts.mode,
        epsilon: opts.epsilon,
        per_point,
        skipped,
        mape_ar,
    })
}
