//! Regular and seasonal differencing `(1 − B)^d (1 − B^s)^D` and its inverse.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
struct Stage<T> {
    lag: usize,
    /// First `lag` values entering this stage.
    head: Vec<T>,
    /// Last `lag` values entering this stage.
    tail: Vec<T>,
}

/// What [`difference`] dropped, kept so forecasts (or the differenced series
/// itself) can be integrated back to the original scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferenceState<T> {
    stages: Vec<Stage<T>>,
    original_len: usize,
}

impl<T: Scalar> DifferenceState<T> {
    /// Total number of values consumed by differencing.
    pub fn total_lag(&self) -> usize {
        self.stages.iter().map(|s| s.lag).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.stages.is_empty()
    }

    /// Rebuilds the original series from its differenced form.
    pub fn reconstruct(&self, differenced: &[T]) -> Result<Vec<T>> {
        let expected = self.original_len - self.total_lag();
        if differenced.len() != expected {
            return Err(Error::StateMismatch(format!(
                "expected {expected} differenced values, got {}",
                differenced.len()
            )));
        }
        let mut series = differenced.to_vec();
        for stage in self.stages.iter().rev() {
            let mut out = stage.head.clone();
            out.reserve(series.len());
            for (i, &w) in series.iter().enumerate() {
                let prev = out[i];
                out.push(w + prev);
            }
            series = out;
        }
        Ok(series)
    }
}

/// Applies `D` seasonal differences at lag `s`, then `d` regular ones.
pub fn difference<T: Scalar>(
    values: &[T],
    d: usize,
    seasonal_d: usize,
    period: usize,
) -> Result<(Vec<T>, DifferenceState<T>)> {
    if seasonal_d > 0 && period == 0 {
        return Err(domain(
            "period",
            "seasonal differencing needs a period >= 1",
        ));
    }
    let needed = d + period * seasonal_d;
    if values.len() <= needed {
        return Err(Error::SeriesTooShort {
            needed,
            len: values.len(),
        });
    }
    let lags = std::iter::repeat_n(period, seasonal_d).chain(std::iter::repeat_n(1, d));
    let mut series = values.to_vec();
    let mut stages = Vec::with_capacity(d + seasonal_d);
    for lag in lags {
        stages.push(Stage {
            lag,
            head: series[..lag].to_vec(),
            tail: series[series.len() - lag..].to_vec(),
        });
        series = (lag..series.len())
            .map(|t| series[t] - series[t - lag])
            .collect();
    }
    Ok((
        series,
        DifferenceState {
            stages,
            original_len: values.len(),
        },
    ))
}

/// Integrates forecasts of the differenced series back to the original
/// scale, continuing from the end of the differenced data.
pub fn undifference<T: Scalar>(forecasts: &[T], state: &DifferenceState<T>) -> Vec<T> {
    let mut series = forecasts.to_vec();
    for stage in state.stages.iter().rev() {
        let mut history = stage.tail.clone();
        let out: Vec<T> = series
            .iter()
            .map(|&f| {
                let y = f + history[history.len() - stage.lag];
                history.push(y);
                y
            })
            .collect();
        series = out;
    }
    series
}
