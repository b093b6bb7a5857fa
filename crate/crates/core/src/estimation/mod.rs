//! Least-squares q-Gaussian fits of empirical exceedance curves, direct
//! tail-exponent estimates and the log-log power-law regressions that
//! relate `q`, `β` and the time scale.

pub mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::qgaussian::{ccdf_abs, tail_to_q, QGaussianParams, TailExponent};
use crate::returns::EmpiricalCCDF;
use simplex::NelderMead;

pub const Q_BOUNDS: (f64, f64) = (1.01, 2.99);
pub const BETA_BOUNDS: (f64, f64) = (1e-4, 1e4);
pub const DEFAULT_TAIL_FRACTION: f64 = 0.3;
pub const MIN_FIT_POINTS: usize = 8;
pub const MIN_TAIL_POINTS: usize = 5;

/// One fitted time scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleFitResult {
    pub dt: u32,
    pub q: f64,
    pub beta: f64,
    #[serde(default)]
    pub residual: f64,
    #[serde(default)]
    pub n_points: usize,
    #[serde(default = "default_converged")]
    pub converged: bool,
}

fn default_converged() -> bool {
    true
}

/// `y = amplitude * x^exponent`, fitted by least squares in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub exponent_stderr: f64,
    pub r_squared: f64,
}

impl PowerLawFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.amplitude * x.powf(self.exponent)
    }
}

/// The three scaling relations: `q - 1` and `1/β` against the time scale,
/// and `1/β` against `q - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub tau_fit: PowerLawFit,
    pub gamma_fit: PowerLawFit,
    pub delta_fit: PowerLawFit,
}

fn logistic(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// Maps unconstrained simplex coordinates into the open `(q, β)` box.
#[derive(Debug, Clone, Copy)]
struct BoxTransform;

impl BoxTransform {
    fn to_params(self, u: &[f64]) -> (f64, f64) {
        let (q_lo, q_hi) = Q_BOUNDS;
        let (b_lo, b_hi) = (BETA_BOUNDS.0.ln(), BETA_BOUNDS.1.ln());
        let q = q_lo + (q_hi - q_lo) * logistic(u[0]);
        let beta = (b_lo + (b_hi - b_lo) * logistic(u[1])).exp();
        (q, beta)
    }

    fn to_unbounded(self, q: f64, beta: f64) -> [f64; 2] {
        let (q_lo, q_hi) = Q_BOUNDS;
        let (b_lo, b_hi) = (BETA_BOUNDS.0.ln(), BETA_BOUNDS.1.ln());
        let edge = 1e-6;
        let pq = ((q - q_lo) / (q_hi - q_lo)).clamp(edge, 1.0 - edge);
        let pb = ((beta.ln() - b_lo) / (b_hi - b_lo)).clamp(edge, 1.0 - edge);
        [logit(pq), logit(pb)]
    }
}

/// Sum of squared differences between `log10` of the empirical and model
/// exceedance probabilities. Invalid parameters or a vanishing model
/// probability give `+inf`.
pub fn log_ccdf_objective(ccdf: &EmpiricalCCDF, q: f64, beta: f64) -> f64 {
    let Ok(params) = QGaussianParams::new(q, beta) else {
        return f64::INFINITY;
    };
    let mut total = 0.0;
    for (&x, &p) in ccdf.thresholds.iter().zip(&ccdf.probabilities) {
        match ccdf_abs(&params, x) {
            Ok(m) if m > 0.0 => total += (p.log10() - m.log10()).powi(2),
            _ => return f64::INFINITY,
        }
    }
    total
}

/// Fits `(q, β)` by minimizing [`log_ccdf_objective`] with a bounded
/// simplex search, restarted once from its first optimum.
///
/// Without `init` the search starts at `q` from the tail exponent of the
/// upper 30% of thresholds and `β = 1`.
pub fn fit_qgaussian_ccdf(
    ccdf: &EmpiricalCCDF,
    init: Option<(f64, f64)>,
) -> Result<ScaleFitResult> {
    if ccdf.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "q-Gaussian fit needs at least {MIN_FIT_POINTS} points, got {}",
            ccdf.len()
        )));
    }
    if ccdf.probabilities.iter().any(|p| p.is_nan() || *p <= 0.0) {
        return domain("all exceedance probabilities must be positive");
    }
    let (q0, beta0) = match init {
        Some(start) => start,
        None => (initial_q(ccdf), 1.0),
    };
    if !(q0.is_finite() && beta0 > 0.0 && beta0.is_finite()) {
        return domain(format!("invalid starting point ({q0}, {beta0})"));
    }

    let transform = BoxTransform;
    let objective = |u: &[f64]| {
        let (q, beta) = transform.to_params(u);
        log_ccdf_objective(ccdf, q, beta)
    };
    let nm = NelderMead::default();
    let first = nm.minimize(objective, &transform.to_unbounded(q0, beta0));
    let second = nm.minimize(objective, &first.x);
    let best = if second.value <= first.value {
        second
    } else {
        first
    };
    let (q, beta) = transform.to_params(&best.x);
    Ok(ScaleFitResult {
        dt: ccdf.dt,
        q,
        beta,
        residual: best.value,
        n_points: ccdf.len(),
        converged: best.converged && best.value.is_finite(),
    })
}

fn initial_q(ccdf: &EmpiricalCCDF) -> f64 {
    estimate_tail_exponent(ccdf, DEFAULT_TAIL_FRACTION)
        .map(tail_to_q)
        .unwrap_or(1.5)
        .clamp(Q_BOUNDS.0 + 1e-3, Q_BOUNDS.1 - 1e-3)
}

/// Tail exponent from an ordinary least-squares line through
/// `(ln x, ln P)` over the largest `tail_fraction` of the thresholds.
pub fn estimate_tail_exponent(ccdf: &EmpiricalCCDF, tail_fraction: f64) -> Result<TailExponent> {
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return domain(format!("tail fraction {tail_fraction} outside (0, 1)"));
    }
    let n = ccdf.len();
    let k = ((n as f64) * tail_fraction).ceil() as usize;
    if k < MIN_TAIL_POINTS {
        return Err(Error::InsufficientData(format!(
            "tail region holds {k} points, need {MIN_TAIL_POINTS}"
        )));
    }
    let lx: Vec<f64> = ccdf.thresholds[n - k..].iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ccdf.probabilities[n - k..].iter().map(|p| p.ln()).collect();
    let line = ols(&lx, &ly)?;
    TailExponent::new(-line.slope)
}

struct Line {
    slope: f64,
    intercept: f64,
    slope_stderr: f64,
    r_squared: f64,
}

fn ols(x: &[f64], y: &[f64]) -> Result<Line> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx.is_nan() || sxx <= 0.0 {
        return Err(Error::Degenerate(
            "regression abscissae are all equal".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let slope_stderr = if x.len() > 2 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    let r_squared = if syy > 0.0 {
        (1.0 - ssr / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(Line {
        slope,
        intercept,
        slope_stderr,
        r_squared,
    })
}

/// Ordinary least squares of `ln y` on `ln x`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return domain(format!("{} abscissae but {} ordinates", xs.len(), ys.len()));
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "power-law fit needs at least 3 points, got {}",
            xs.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0 && v.is_finite())) {
        return domain("power-law fit needs positive finite data");
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let line = ols(&lx, &ly)?;
    Ok(PowerLawFit {
        exponent: line.slope,
        amplitude: line.intercept.exp(),
        exponent_stderr: line.slope_stderr,
        r_squared: line.r_squared,
    })
}

/// Fits the three scaling relations across time scales.
pub fn scaling_report(fits: &[ScaleFitResult]) -> Result<ScalingReport> {
    let mut rows: Vec<&ScaleFitResult> = fits.iter().collect();
    rows.sort_by_key(|r| r.dt);
    if rows.windows(2).any(|w| w[0].dt == w[1].dt) {
        return domain("scaling report needs distinct time scales");
    }
    if rows.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "scaling report needs at least 3 time scales, got {}",
            rows.len()
        )));
    }
    let dt: Vec<f64> = rows.iter().map(|r| f64::from(r.dt)).collect();
    let q_minus_1: Vec<f64> = rows.iter().map(|r| r.q - 1.0).collect();
    let inv_beta: Vec<f64> = rows.iter().map(|r| 1.0 / r.beta).collect();
    Ok(ScalingReport {
        tau_fit: fit_power_law(&dt, &q_minus_1)?,
        gamma_fit: fit_power_law(&dt, &inv_beta)?,
        delta_fit: fit_power_law(&q_minus_1, &inv_beta)?,
    })
}
