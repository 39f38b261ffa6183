//! CSV import/export.
//!
//! All files are UTF-8 with LF line endings. Floats are written with Rust's
//! shortest round-trip formatting, so reading a file back reproduces every
//! value bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gpr::Reconstruction;
use crate::scalar::Scalar;
use crate::simulate::{Observations, TimeGrid, TimeSeries};

/// Relative tolerance on spacing for a series to count as regularly gridded.
pub const REGULAR_SPACING_TOL: f64 = 1e-9;

/// `t,y` table.
pub fn series_csv<T: Scalar>(times: &[T], values: &[T]) -> String {
    let mut out = String::from("t,y\n");
    for (t, y) in times.iter().zip(values) {
        writeln!(out, "{t},{y}").expect("writing to String");
    }
    out
}

pub fn time_series_csv<T: Scalar>(series: &TimeSeries<T>) -> String {
    series_csv(&series.times(), &series.values)
}

pub fn observations_csv<T: Scalar>(obs: &Observations<T>) -> String {
    series_csv(&obs.times, &obs.values)
}

/// `t,mean,var,draw1,draw2,...` table.
pub fn reconstruction_csv<T: Scalar>(rec: &Reconstruction<T>) -> String {
    let mut out = String::from("t,mean,var");
    for i in 1..=rec.draws.len() {
        write!(out, ",draw{i}").expect("writing to String");
    }
    out.push('\n');
    for i in 0..rec.times.len() {
        write!(out, "{},{},{}", rec.times[i], rec.mean[i], rec.variance[i])
            .expect("writing to String");
        for d in &rec.draws {
            write!(out, ",{}", d[i]).expect("writing to String");
        }
        out.push('\n');
    }
    out
}

/// Parsed `t,y` file.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesData<T> {
    /// Uniform spacing: a grid series.
    Regular(TimeSeries<T>),
    /// Anything else: bare, strictly increasing `(t, y)` columns.
    Irregular { times: Vec<T>, values: Vec<T> },
}

impl<T: Scalar> SeriesData<T> {
    pub fn times(&self) -> Vec<T> {
        match self {
            Self::Regular(s) => s.times(),
            Self::Irregular { times, .. } => times.clone(),
        }
    }

    pub fn values(&self) -> &[T] {
        match self {
            Self::Regular(s) => &s.values,
            Self::Irregular { values, .. } => values,
        }
    }

    /// Places irregular points on `grid` as observations.
    pub fn into_observations(self, grid: &TimeGrid<T>) -> Result<Observations<T>> {
        let times = self.times();
        let values = self.values().to_vec();
        Observations::locate(grid, times, values)
    }
}

/// Parses a `t,y` CSV.
pub fn parse_series_csv<T: Scalar>(text: &str) -> Result<SeriesData<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if header.len() != 2 || &header[0] != "t" || &header[1] != "y" {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header `t,y`, found `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut times: Vec<T> = Vec::new();
    let mut values: Vec<T> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| -> Result<T> {
            let raw = &record[i];
            raw.parse::<T>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("`{raw}` is not a finite number"),
                })
        };
        let (t, y) = (field(0)?, field(1)?);
        if times.last().is_some_and(|&prev| t <= prev) {
            return Err(Error::NonMonotonicTime { line });
        }
        times.push(t);
        values.push(y);
    }
    if times.is_empty() {
        return Err(Error::Parse {
            line: 2,
            message: "no data rows".into(),
        });
    }
    Ok(classify(times, values))
}

fn classify<T: Scalar>(times: Vec<T>, values: Vec<T>) -> SeriesData<T> {
    let n = times.len();
    if n >= 2 {
        let dt = (times[n - 1] - times[0]) / T::of((n - 1) as f64);
        let tol = T::of(REGULAR_SPACING_TOL) * dt;
        let uniform = times.windows(2).all(|w| ((w[1] - w[0]) - dt).abs() <= tol);
        if uniform {
            if let Ok(grid) = TimeGrid::new(times[0], dt, n) {
                if let Ok(series) = TimeSeries::new(grid, values.clone()) {
                    return SeriesData::Regular(series);
                }
            }
        }
    }
    SeriesData::Irregular { times, values }
}

/// Reads a `t,y` CSV file.
pub fn read_series_csv<T: Scalar>(path: impl AsRef<Path>) -> Result<SeriesData<T>> {
    parse_series_csv(&std::fs::read_to_string(path)?)
}
