//! Acceptance gate. Each test checks one criterion at its pinned tolerance
//! and prints a single PASS/FAIL line.
//!
//! Run alone with `cargo test -p sparsegp --test acceptance`.

mod common;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::Rng;
use sparsegp::arima::{difference, fit_ar_yule_walker, fit_arima_css, ArimaOrder, CssOptions};
use sparsegp::config::{ConfigFile, ExperimentConfig};
use sparsegp::evaluate::{mape_ar, SecondaryModelSpec};
use sparsegp::experiment::{run_cells, run_experiment};
use sparsegp::gpr::GpPosterior;
use sparsegp::kernel::KernelParams;
use sparsegp::rng::task_seed;
use sparsegp::simulate::{make_grid, sample_gp_prior, white_noise, Observations, TimeSeries};

fn report(id: u32, name: &str, ok: bool, detail: String, elapsed: Duration) {
    let status = if ok { "PASS" } else { "FAIL" };
    let line = format!(
        "[{status}] criterion {id}: {name} ({detail}; {:.2}s)\n",
        elapsed.as_secs_f64()
    );
    // direct write: libtest only captures the print macros
    let _ = std::io::stderr().write_all(line.as_bytes());
}

// Figure-2 magnitude band and the informativeness check against white noise.
const FIG2_SEEDS: u64 = 20;
const FIG2_BAND: (f64, f64) = (0.001, 0.2);
const FIG2_MIN_WINS: usize = 18;
const FIG2_BUDGET: Duration = Duration::from_secs(60);

#[test]
fn criterion_1_figure2_magnitude() {
    let start = Instant::now();
    // (process, sparsity) -> per-seed scores
    let mut gp_scores: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    let mut wins: BTreeMap<(String, String), usize> = BTreeMap::new();
    for seed in 0..FIG2_SEEDS {
        let config = ConfigFile {
            seed: Some(seed),
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert_eq!(config.secondary, SecondaryModelSpec::pure_ar(2));
        assert_eq!(config.eval.horizon, 1);
        let out = run_cells(&config).unwrap();
        for (ci, cell) in out.cells.iter().enumerate() {
            let key = (cell.process.clone(), format!("{}", cell.sparsity));
            gp_scores
                .entry(key.clone())
                .or_default()
                .push(cell.report.mape_ar);
            let noise = white_noise(
                &config.grid,
                1.0,
                task_seed(config.seeds.sampling ^ 0x5eed, ci as u64),
            )
            .unwrap();
            let baseline =
                mape_ar(&noise, &cell.observations, &config.secondary, &config.eval).unwrap();
            if cell.report.mape_ar <= baseline.mape_ar {
                *wins.entry(key).or_default() += 1;
            }
        }
    }
    let elapsed = start.elapsed();

    let mut ok = elapsed < FIG2_BUDGET;
    let mut detail = Vec::new();
    assert_eq!(gp_scores.len(), 6);
    for (key, scores) in &gp_scores {
        let mean = scores.iter().sum::<f64>() / scores.len() as f64;
        let w = wins.get(key).copied().unwrap_or(0);
        let cell_ok = mean >= FIG2_BAND.0 && mean <= FIG2_BAND.1 && w >= FIG2_MIN_WINS;
        ok &= cell_ok;
        detail.push(format!(
            "{}@{}: mean {:.4}, wins {}/{}",
            key.0, key.1, mean, w, FIG2_SEEDS
        ));
    }
    report(
        1,
        "Figure-2 magnitude over 20 seeds",
        ok,
        detail.join("; "),
        elapsed,
    );
    assert!(ok, "{}", detail.join("\n"));
}

#[test]
fn criterion_2_kernel_suite() {
    let start = Instant::now();
    let mut r = common::rng(2);
    let mut failures = Vec::new();
    for case in 0..100 {
        let d = if case % 4 == 0 { 2 } else { 1 };
        let sigma2 = r.random_range(0.1..3.0);
        let beta = r.random_range(0.1..2.0);
        let l: Vec<f64> = (0..d).map(|_| r.random_range(1.0..5.0)).collect();
        // (0, 2] including the closed end
        let alpha: Vec<f64> = (0..d)
            .map(|_| {
                if r.random_bool(0.1) {
                    2.0
                } else {
                    r.random_range(0.05..2.0)
                }
            })
            .collect();
        let p = KernelParams::new(sigma2, beta, l.clone(), alpha.clone()).unwrap();
        let n = r.random_range(2..40);
        let mut pts: Vec<Vec<f64>> = Vec::new();
        while pts.len() < n {
            let cand: Vec<f64> = (0..d).map(|_| r.random_range(0.0..5.0)).collect();
            if !pts.contains(&cand) {
                pts.push(cand);
            }
        }
        let k = p.matrix(&pts, &pts).unwrap();
        for i in 0..n {
            for j in 0..n {
                let v = k[(i, j)];
                let scalar = p.value(&pts[i], &pts[j]).unwrap();
                if v != scalar {
                    failures.push(format!(
                        "case {case}: matrix ({i},{j}) {v} != kernel_value {scalar}"
                    ));
                }
                let independent = common::naive_kernel(sigma2, beta, &l, &alpha, &pts[i], &pts[j]);
                if (scalar - independent).abs() > 1e-14 * sigma2 {
                    failures.push(format!(
                        "case {case}: kernel_value {scalar} vs formula {independent}"
                    ));
                }
                if v != k[(j, i)]
                    || p.value(&pts[i], &pts[j]).unwrap() != p.value(&pts[j], &pts[i]).unwrap()
                {
                    failures.push(format!("case {case}: asymmetric at ({i},{j})"));
                }
                let bound_ok = if i == j {
                    v == sigma2
                } else {
                    v > 0.0 && v < sigma2
                };
                if !bound_ok {
                    failures.push(format!("case {case}: bound violated at ({i},{j}): {v}"));
                }
            }
        }
        if d == 1 {
            let a = pts[0][0];
            let mut by_dist: Vec<(f64, f64)> = pts[1..]
                .iter()
                .map(|q| ((q[0] - a).abs(), p.value(&[a], q).unwrap()))
                .collect();
            by_dist.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            for w in by_dist.windows(2) {
                if w[0].0 < w[1].0 && (w[0].1 <= w[1].1 || w[0].1.is_nan()) {
                    failures.push(format!("case {case}: not monotone in distance {w:?}"));
                }
            }
        }
        let min_eig = common::min_eigenvalue(n, k.as_slice());
        if min_eig < -1e-8 {
            failures.push(format!("case {case}: min eigenvalue {min_eig:e}"));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(5);
    report(
        2,
        "kernel symmetry/bound/monotonicity/PSD/naive equality, 100 configs",
        ok,
        format!("{} violations", failures.len()),
        elapsed,
    );
    assert!(ok, "{failures:#?}");
}

#[test]
fn criterion_3_gp_oracle_equivalence() {
    let start = Instant::now();
    let mut r = common::rng(3);
    let mut worst_mean = 0.0f64;
    let mut worst_cov = 0.0f64;
    let mut worst_interp = 0.0f64;
    let mut interp_ok = true;
    for case in 0..50 {
        let m = r.random_range(1..=8);
        let alpha = r.random_range(0.5..2.0);
        let lengthscale = r.random_range(0.5..3.0);
        let p = KernelParams::univariate(
            r.random_range(0.5..2.0),
            r.random_range(0.5..1.5),
            lengthscale,
            alpha,
        )
        .unwrap();
        let noise2 = if case % 2 == 0 {
            0.0
        } else {
            r.random_range(1e-3..0.5)
        };
        // well separated training times keep the noise-free system well conditioned
        let mut t = 0.0;
        let times: Vec<f64> = (0..m)
            .map(|_| {
                t += r.random_range(0.3..1.0);
                t
            })
            .collect();
        let y: Vec<f64> = (0..m).map(|_| common::normal(&mut r) * 1.5).collect();
        let q: Vec<f64> = (0..6)
            .map(|_| r.random_range(-1.0..t + 1.0))
            .chain(times.iter().copied())
            .collect();

        let gp = GpPosterior::fit_points(&times, &y, &p, noise2).unwrap();
        let mean = gp.predict_mean(&q).unwrap();
        let cov = gp.predict_cov(&q).unwrap().matrix;

        let kern = |a: f64, b: f64| {
            common::naive_kernel(p.sigma2, p.beta, &p.lengthscales, &p.exponents, &[a], &[b])
        };
        let kxx = DMatrix::from_fn(m, m, |i, j| kern(times[i], times[j]));
        let ksx = DMatrix::from_fn(q.len(), m, |i, j| kern(q[i], times[j]));
        let kss = DMatrix::from_fn(q.len(), q.len(), |i, j| kern(q[i], q[j]));
        let (o_mean, o_cov) = common::dense_gp_posterior(&kxx, &ksx, &kss, noise2, &y);

        for i in 0..q.len() {
            worst_mean = worst_mean.max((mean[i] - o_mean[i]).abs());
            for j in 0..q.len() {
                worst_cov = worst_cov.max((cov[(i, j)] - o_cov[(i, j)]).abs());
            }
        }
        if noise2 == 0.0 {
            let max_y = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let at_train = gp.predict_mean(&times).unwrap();
            for (a, b) in at_train.iter().zip(&y) {
                let e = (a - b).abs();
                worst_interp = worst_interp.max(e);
                interp_ok &= e <= 1e-6 * (1.0 + max_y);
            }
        }
    }
    let elapsed = start.elapsed();
    let ok =
        worst_mean <= 1e-8 && worst_cov <= 1e-8 && interp_ok && elapsed < Duration::from_secs(5);
    report(
        3,
        "GP posterior vs dense-inverse oracle, 50 instances",
        ok,
        format!("max |Δmean| {worst_mean:.2e}, max |Δcov| {worst_cov:.2e}, max interp err {worst_interp:.2e}"),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_4_prior_sampling_statistics() {
    let start = Instant::now();
    let grid = make_grid(0.0, 0.02, 351).unwrap();
    let p = KernelParams::ornstein_uhlenbeck();
    let draws = sample_gp_prior(&p, &grid, 0.0, 4, 2000).unwrap();
    let column = |i: usize| -> Vec<f64> { draws.iter().map(|s| s.values[i]).collect() };
    let cols: Vec<Vec<f64>> = (0..grid.n).map(column).collect();
    let (mut vmin, mut vmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for c in &cols {
        let v = common::sample_variance(c);
        vmin = vmin.min(v);
        vmax = vmax.max(v);
    }
    let target = (-0.01f64).exp();
    let mut worst_corr = 0.0f64;
    for i in 0..grid.n - 1 {
        worst_corr = worst_corr.max((common::correlation(&cols[i], &cols[i + 1]) - target).abs());
    }
    let elapsed = start.elapsed();
    let ok = vmin >= 0.9 && vmax <= 1.1 && worst_corr <= 0.05 && elapsed < Duration::from_secs(10);
    report(
        4,
        "OU prior draws: pointwise variance and lag-1 correlation",
        ok,
        format!("variance in [{vmin:.4}, {vmax:.4}], max |corr − e^-0.01| {worst_corr:.2e}"),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_5_ar_arima_recovery() {
    let start = Instant::now();
    let x = common::simulate_ar1(0.8, 5000, 51);
    let yw = fit_ar_yule_walker(&x, 1).unwrap().ar[0];

    let x = common::simulate_ar1(0.6, 3000, 52);
    let css_ar = fit_arima_css(&x, ArimaOrder::ar(1), &CssOptions::default())
        .unwrap()
        .ar[0];

    let x = common::simulate_ma1(0.5, 3000, 53);
    let css_ma = fit_arima_css(&x, ArimaOrder::arima(0, 0, 1), &CssOptions::default())
        .unwrap()
        .ma[0];

    let mut round_trip_ok = true;
    let mut r = common::rng(54);
    let ints: Vec<f64> = (0..200)
        .map(|_| r.random_range(-1000..1000) as f64)
        .collect();
    for d in 0..=2 {
        for sd in 0..=1 {
            for s in 1..=24 {
                let (w, state) = difference(&ints, d, sd, s).unwrap();
                round_trip_ok &= state.reconstruct(&w).unwrap() == ints;
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = (yw - 0.8).abs() <= 0.05
        && (css_ar - 0.6).abs() <= 0.05
        && (css_ma - 0.5).abs() <= 0.1
        && round_trip_ok
        && elapsed < Duration::from_secs(15);
    report(
        5,
        "Yule-Walker / CSS recovery and differencing round trip",
        ok,
        format!(
            "YW φ̂ {yw:.4}, CSS φ̂ {css_ar:.4}, CSS θ̂ {css_ma:.4}, round trip exact: {round_trip_ok}"
        ),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_6_no_look_ahead() {
    let start = Instant::now();
    let config = ExperimentConfig::default();
    let out = run_cells(&config).unwrap();
    let mut changed = 0usize;
    let mut checked = 0usize;
    let mut worst_mean_err = 0.0f64;
    let mut r = common::rng(6);
    for cell in &out.cells {
        let report = &cell.report;
        let recomputed =
            report.per_point.iter().map(|p| p.ape).sum::<f64>() / report.per_point.len() as f64;
        worst_mean_err = worst_mean_err.max((recomputed - report.mape_ar).abs());

        let base = TimeSeries::new(config.grid, cell.reconstruction.mean.clone()).unwrap();
        for (pos, point) in report.per_point.iter().enumerate() {
            let cutoff = point.grid_index - config.eval.horizon;
            let mut mutated = base.clone();
            for v in &mut mutated.values[cutoff + 1..] {
                *v += 10.0 * common::normal(&mut r);
            }
            let again = mape_ar(
                &mutated,
                &cell.observations,
                &config.secondary,
                &config.eval,
            )
            .unwrap();
            checked += 1;
            if again.per_point[pos].forecast.to_bits() != point.forecast.to_bits() {
                changed += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = changed == 0 && worst_mean_err <= 1e-12;
    report(
        6,
        "MAPE-AR no look-ahead and report arithmetic",
        ok,
        format!(
            "{changed}/{checked} forecasts changed, mean recomputation error {worst_mean_err:.1e}"
        ),
        elapsed,
    );
    assert!(ok);
}

fn read_tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(dir: &Path, root: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(&path, root, out);
            } else {
                let rel = path
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

#[test]
fn criterion_7_determinism() {
    let start = Instant::now();
    let config = ConfigFile {
        seed: Some(2024),
        ..Default::default()
    }
    .resolve()
    .unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_experiment(&config, a.path()).unwrap();
    run_experiment(&config, b.path()).unwrap();
    let ta = read_tree(a.path());
    let tb = read_tree(b.path());
    let ok = !ta.is_empty() && ta == tb;
    report(
        7,
        "byte-identical output trees for the same master seed",
        ok,
        format!("{} files compared", ta.len()),
        start.elapsed(),
    );
    assert!(ok);
}

#[test]
fn reported_points_use_observed_values() {
    let config = ExperimentConfig::default();
    let out = run_cells(&config).unwrap();
    let cell = &out.cells[0];
    let obs: &Observations<f64> = &cell.observations;
    for p in &cell.report.per_point {
        assert_eq!(p.observed, obs.values[p.k - 1]);
    }
}
