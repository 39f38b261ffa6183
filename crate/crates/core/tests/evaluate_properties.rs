mod common;

use sparsegp::arima::ArimaOrder;
use sparsegp::evaluate::{mape_ar, EvalOptions, SecondaryModelSpec};
use sparsegp::gpr::GpPosterior;
use sparsegp::kernel::KernelParams;
use sparsegp::simulate::{
    make_grid, sample_gp_prior, sparsify, white_noise, Observations, TimeSeries,
};

fn reconstructed(seed: u64) -> (TimeSeries<f64>, Observations<f64>) {
    let grid = make_grid(0.0, 0.02, 351).unwrap();
    let p = KernelParams::fractional();
    let truth = sample_gp_prior(&p, &grid, 0.0, seed, 1).unwrap().remove(0);
    let obs = sparsify(&truth, 0.05, 5, seed + 1).unwrap();
    let gp = GpPosterior::fit(&obs, &p, 1e-6).unwrap();
    let mean = gp.predict_mean(&grid.times()).unwrap();
    (TimeSeries::new(grid, mean).unwrap(), obs)
}

#[test]
fn scale_invariance_for_pure_ar() {
    let (rec, obs) = reconstructed(41);
    let spec = SecondaryModelSpec::pure_ar(2);
    let opts = EvalOptions::default();
    let base = mape_ar(&rec, &obs, &spec, &opts).unwrap();
    for c in [0.01, 3.0, 250.0] {
        let rec_c = TimeSeries::new(rec.grid, rec.values.iter().map(|v| v * c).collect()).unwrap();
        let mut obs_c = obs.clone();
        obs_c.values.iter_mut().for_each(|v| *v *= c);
        let scaled = mape_ar(&rec_c, &obs_c, &spec, &opts).unwrap();
        assert!(
            (scaled.mape_ar - base.mape_ar).abs() <= 1e-9 * base.mape_ar.max(1.0),
            "c={c}"
        );
    }
}

#[test]
fn gp_beats_noise_on_average() {
    let spec = SecondaryModelSpec::pure_ar(2);
    let opts = EvalOptions::default();
    let (mut gp_sum, mut noise_sum) = (0.0, 0.0);
    for seed in 0..20 {
        let (rec, obs) = reconstructed(100 + 2 * seed);
        let noise = white_noise(&rec.grid, 1.0, 900 + seed).unwrap();
        gp_sum += mape_ar(&rec, &obs, &spec, &opts).unwrap().mape_ar;
        noise_sum += mape_ar(&noise, &obs, &spec, &opts).unwrap().mape_ar;
    }
    assert!(gp_sum <= noise_sum, "gp {gp_sum} noise {noise_sum}");
}

#[test]
fn exact_constant_reconstruction_scores_zero() {
    let grid = make_grid(0.0, 0.02, 200).unwrap();
    let rec = TimeSeries::new(grid, vec![2.5; 200]).unwrap();
    let obs = Observations::from_indices(&rec, vec![10, 50, 90, 130, 170]).unwrap();
    let report = mape_ar(
        &rec,
        &obs,
        &SecondaryModelSpec::pure_ar(2),
        &EvalOptions::default(),
    )
    .unwrap();
    assert_eq!(report.mape_ar, 0.0);
}

#[test]
fn seasonal_secondary_falls_back_on_short_prefixes() {
    let (rec, obs) = reconstructed(43);
    let spec =
        SecondaryModelSpec::seasonal_arima(ArimaOrder::new((1, 1, 1), (1, 1, 1), 12).unwrap());
    let report = mape_ar(&rec, &obs, &spec, &EvalOptions::default()).unwrap();
    assert_eq!(report.n_points() + report.skipped.len(), obs.len() - 1);
    assert!(report.per_point.iter().any(|p| p.fallback_used));
    assert!(report.per_point.iter().all(|p| p.forecast.is_finite()));
    let mean = report.per_point.iter().map(|p| p.ape).sum::<f64>() / report.n_points() as f64;
    assert!((mean - report.mape_ar).abs() < 1e-12);
}

#[test]
fn longer_horizon_skips_nothing_on_default_grid() {
    let (rec, obs) = reconstructed(44);
    let opts = EvalOptions {
        horizon: 3,
        ..EvalOptions::default()
    };
    let report = mape_ar(&rec, &obs, &SecondaryModelSpec::pure_ar(2), &opts).unwrap();
    assert_eq!(report.horizon, 3);
    for p in &report.per_point {
        assert!(p.grid_index >= 3);
    }
}
