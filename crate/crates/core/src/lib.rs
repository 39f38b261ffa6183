//! Gaussian-process reconstruction of sparse, irregularly sampled time
//! series, scored by rolling secondary autoregressive forecasts (MAPE-AR).
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! experiment driver and file formats work in `f64`. Concrete aliases for
//! both precisions are exported at the crate root.

// NaN-rejecting guards are written as `!(x > 0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arima;
pub mod config;
pub mod error;
pub mod evaluate;
pub mod experiment;
pub mod gpr;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod rng;
pub mod scalar;
pub mod simulate;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type KernelParams = kernel::KernelParams<f64>;
pub type KernelParams32 = kernel::KernelParams<f32>;
pub type TimeGrid = simulate::TimeGrid<f64>;
pub type TimeGrid32 = simulate::TimeGrid<f32>;
pub type TimeSeries = simulate::TimeSeries<f64>;
pub type TimeSeries32 = simulate::TimeSeries<f32>;
pub type Observations = simulate::Observations<f64>;
pub type Observations32 = simulate::Observations<f32>;
pub type GpPosterior = gpr::GpPosterior<f64>;
pub type GpPosterior32 = gpr::GpPosterior<f32>;
pub type ArimaFit = arima::ArimaFit<f64>;
pub type ArimaFit32 = arima::ArimaFit<f32>;
pub type EvalReport = evaluate::EvalReport<f64>;
pub type EvalReport32 = evaluate::EvalReport<f32>;
pub type Matrix = linalg::Matrix<f64>;
pub type Matrix32 = linalg::Matrix<f32>;
