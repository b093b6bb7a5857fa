mod common;

use common::log_grid;
use qcrit::estimation::{
    estimate_tail_exponent, fit_power_law, fit_qgaussian_ccdf, log_ccdf_objective, scaling_report,
    ScaleFitResult,
};
use qcrit::qgaussian::{ccdf_abs, sample, tail_to_q, QGaussianParams};
use qcrit::returns::{empirical_ccdf, EmpiricalCCDF, GridSpec, NormalizedReturns};
use qcrit::table1::table1_rows;

fn model_curve(q: f64, beta: f64, lo: f64, hi: f64, count: usize) -> EmpiricalCCDF {
    let p = QGaussianParams::new(q, beta).unwrap();
    let xs = log_grid(lo, hi, count);
    let ps = xs.iter().map(|x| ccdf_abs(&p, *x).unwrap()).collect();
    EmpiricalCCDF::from_points(1, xs, ps, 0).unwrap()
}

fn row(dt: u32, q: f64, beta: f64) -> ScaleFitResult {
    ScaleFitResult {
        dt,
        q,
        beta,
        residual: 0.0,
        n_points: 0,
        converged: true,
    }
}

#[test]
fn noiseless_curves_are_recovered() {
    for q in [1.2, 1.5, 1.8, 2.2] {
        for beta in [0.5, 1.0, 2.0] {
            let c = model_curve(q, beta, 1e-2, 1e2, 60);
            let f = fit_qgaussian_ccdf(&c, None).unwrap();
            assert!(f.converged, "q={q} beta={beta}");
            assert!((f.q - q).abs() < 1e-4, "q={q} beta={beta}: {f:?}");
            assert!((f.beta - beta).abs() < 1e-3, "q={q} beta={beta}: {f:?}");
            assert_eq!(f.n_points, 60);
        }
    }
}

#[test]
fn table_row_curve_is_recovered() {
    let c = model_curve(1.53, 1.78, 1e-2, 1e2, 60);
    let f = fit_qgaussian_ccdf(&c, None).unwrap();
    assert!((f.q - 1.53).abs() < 1e-4);
    assert!((f.beta - 1.78).abs() < 1e-3);
    assert!(f.residual < 1e-12);
}

#[test]
fn refit_from_optimum_stays_put() {
    for (q, beta) in [(1.53, 1.78), (1.35, 1.03), (2.2, 0.5)] {
        let c = model_curve(q, beta, 1e-2, 1e2, 60);
        let first = fit_qgaussian_ccdf(&c, None).unwrap();
        let again = fit_qgaussian_ccdf(&c, Some((first.q, first.beta))).unwrap();
        assert!((again.q - first.q).abs() < 1e-8);
        assert!((again.beta - first.beta).abs() < 1e-8);
    }
}

#[test]
fn refit_of_noisy_curve_stays_put() {
    let p = QGaussianParams::new(1.45, 1.33).unwrap();
    let r = NormalizedReturns {
        dt: 60,
        values: sample(&p, 50_000, 5).unwrap(),
        mean_removed: 0.0,
        volatility: 1.0,
        span: 50_000,
    };
    let c = empirical_ccdf(&r, &GridSpec::default()).unwrap();
    let first = fit_qgaussian_ccdf(&c, None).unwrap();
    let again = fit_qgaussian_ccdf(&c, Some((first.q, first.beta))).unwrap();
    assert!((again.q - first.q).abs() < 1e-8);
    assert!((again.beta - first.beta).abs() < 1e-8);
    assert_eq!(first.dt, 60);
}

#[test]
fn explicit_start_is_honoured() {
    let c = model_curve(1.8, 2.0, 1e-2, 1e2, 60);
    let f = fit_qgaussian_ccdf(&c, Some((1.1, 0.01))).unwrap();
    assert!(
        (f.q - 1.8).abs() < 1e-4 && (f.beta - 2.0).abs() < 1e-3,
        "{f:?}"
    );
    assert!(fit_qgaussian_ccdf(&c, Some((1.5, -1.0))).is_err());
    assert!(fit_qgaussian_ccdf(&c, Some((f64::NAN, 1.0))).is_err());
}

#[test]
fn objective_vanishes_at_generator() {
    let c = model_curve(1.42, 1.25, 1e-2, 1e2, 60);
    assert!(log_ccdf_objective(&c, 1.42, 1.25) < 1e-24);
    assert!(log_ccdf_objective(&c, 1.5, 1.25) > 1e-3);
    assert_eq!(log_ccdf_objective(&c, 3.5, 1.0), f64::INFINITY);
}

#[test]
fn cauchy_tail_exponent() {
    let c = model_curve(2.0, 1.0, 1e2, 1e4, 40);
    let a = estimate_tail_exponent(&c, 0.5).unwrap();
    assert!((a.alpha() - 1.0).abs() < 0.02, "{}", a.alpha());
}

#[test]
fn table_row_tail_exponent() {
    let c = model_curve(1.53, 1.78, 1e2, 1e4, 40);
    let a = estimate_tail_exponent(&c, 0.5).unwrap();
    assert!((a.alpha() - 1.47 / 0.53).abs() < 0.05, "{}", a.alpha());
    assert!((tail_to_q(a) - 1.53).abs() < 0.02);
}

#[test]
fn both_routes_agree_on_model_curves() {
    for q in [1.2, 1.35, 1.53, 1.8, 2.2] {
        let c = model_curve(q, 1.0, 1e-2, 1e3, 60);
        let ls = fit_qgaussian_ccdf(&c, None).unwrap().q;
        let tail = tail_to_q(estimate_tail_exponent(&c, 0.3).unwrap());
        assert!((ls - tail).abs() <= 0.05, "q={q}: {ls} vs {tail}");
    }
}

#[test]
fn synthetic_draws_fit_near_generator() {
    let p = QGaussianParams::new(1.5, 1.5).unwrap();
    let r = NormalizedReturns {
        dt: 1,
        values: sample(&p, 1_000_000, 0).unwrap(),
        mean_removed: 0.0,
        volatility: 1.0,
        span: 1_000_000,
    };
    let c = empirical_ccdf(&r, &GridSpec::default()).unwrap();
    let f = fit_qgaussian_ccdf(&c, None).unwrap();
    assert!(f.converged);
    assert!((f.q - 1.5).abs() < 0.02, "{f:?}");
    assert!((f.beta - 1.5).abs() < 0.1, "{f:?}");
}

#[test]
fn exact_power_laws_have_zero_error() {
    let xs = [4.0, 8.0, 16.0, 30.0, 60.0, 120.0];
    for (amp, expo) in [(0.9, -0.081), (2.5, 0.106), (0.01, 1.29)] {
        let ys: Vec<f64> = xs.iter().map(|x: &f64| amp * x.powf(expo)).collect();
        let f = fit_power_law(&xs, &ys).unwrap();
        assert!((f.exponent - expo).abs() < 1e-12);
        assert!(((f.amplitude - amp) / amp).abs() < 1e-12);
        assert!(f.exponent_stderr < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }
}

#[test]
fn table_scaling_exponents() {
    let r = scaling_report(&table1_rows()).unwrap();
    assert!(
        (r.tau_fit.exponent.abs() - 0.081).abs() < 0.01,
        "{:?}",
        r.tau_fit
    );
    assert!(
        (r.gamma_fit.exponent.abs() - 0.106).abs() < 0.01,
        "{:?}",
        r.gamma_fit
    );
    assert!(
        (r.delta_fit.exponent.abs() - 1.29).abs() < 0.15,
        "{:?}",
        r.delta_fit
    );
    // q - 1 falls with dt, 1/beta rises with dt
    assert!(r.tau_fit.exponent < 0.0 && r.gamma_fit.exponent > 0.0);
    for f in [r.tau_fit, r.gamma_fit, r.delta_fit] {
        assert!(f.exponent_stderr > 0.0 && f.r_squared > 0.9);
    }
}

#[test]
fn table_scaling_chain_rule() {
    let r = scaling_report(&table1_rows()).unwrap();
    let (t, g, d) = (r.tau_fit, r.gamma_fit, r.delta_fit);
    let ratio = g.exponent / t.exponent;
    let ratio_err = ratio.abs()
        * ((g.exponent_stderr / g.exponent).powi(2) + (t.exponent_stderr / t.exponent).powi(2))
            .sqrt();
    let combined = (ratio_err.powi(2) + d.exponent_stderr.powi(2)).sqrt();
    assert!(
        (ratio.abs() - d.exponent.abs()).abs() <= combined,
        "ratio {ratio} ± {ratio_err}, delta {} ± {}",
        d.exponent,
        d.exponent_stderr
    );
}

#[test]
fn exact_synthetic_tau() {
    let rows: Vec<ScaleFitResult> = [4u32, 8, 16, 30, 60, 120, 240, 390, 780]
        .iter()
        .map(|&dt| {
            let q = 1.0 + 0.7 * f64::from(dt).powf(-0.081);
            row(dt, q, 1.0 / (0.3 * f64::from(dt).powf(0.106)))
        })
        .collect();
    let r = scaling_report(&rows).unwrap();
    assert!((r.tau_fit.exponent + 0.081).abs() < 1e-10);
    assert!((r.tau_fit.amplitude - 0.7).abs() < 1e-10);
    assert!((r.gamma_fit.exponent - 0.106).abs() < 1e-10);
    assert!(r.tau_fit.exponent_stderr < 1e-10 && r.gamma_fit.exponent_stderr < 1e-10);
    assert!((r.delta_fit.exponent + 0.106 / 0.081).abs() < 1e-9);
}

#[test]
fn scaling_rows_are_sorted_by_dt() {
    let mut rows = table1_rows();
    let sorted = scaling_report(&rows).unwrap();
    rows.reverse();
    assert_eq!(scaling_report(&rows).unwrap(), sorted);
}

#[test]
fn scaling_needs_three_scales() {
    let rows = &table1_rows()[..2];
    assert!(scaling_report(rows).is_err());
}

#[test]
fn table_ladder_is_monotone() {
    let rows = table1_rows();
    for w in rows.windows(2) {
        assert!(w[1].q <= w[0].q && w[1].beta <= w[0].beta);
    }
}

#[test]
fn fits_along_table_ladder_are_monotone() {
    let fits: Vec<ScaleFitResult> = table1_rows()
        .iter()
        .map(|r| {
            let mut c = model_curve(r.q, r.beta, 1e-2, 1e2, 60);
            c.dt = r.dt;
            fit_qgaussian_ccdf(&c, None).unwrap()
        })
        .collect();
    for w in fits.windows(2) {
        assert!(w[1].dt > w[0].dt);
        assert!(w[1].q <= w[0].q && w[1].beta <= w[0].beta, "{w:?}");
    }
}
