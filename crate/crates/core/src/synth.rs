//! Synthetic price series whose log increments are q-Gaussian draws.

use crate::error::{domain, Result};
use crate::qgaussian::{sample, QGaussianParams};
use crate::returns::PriceSeries;

/// Starting price of every synthetic walk.
pub const START_PRICE: f64 = 100.0;

/// Geometric random walk with `n_prices` samples at timestamps
/// `0, step, 2 step, ...`; each increment `ln W(t + step) - ln W(t)` is an
/// independent draw from `params`.
pub fn qgaussian_walk(
    id: impl Into<String>,
    params: &QGaussianParams,
    n_prices: usize,
    step: u32,
    seed: u64,
) -> Result<PriceSeries> {
    if n_prices < 2 {
        return domain(format!("a walk needs at least 2 prices, got {n_prices}"));
    }
    if step == 0 {
        return domain("tick step must be positive");
    }
    let increments = sample(params, n_prices - 1, seed)?;
    let mut log_prices = Vec::with_capacity(n_prices);
    let mut level = START_PRICE.ln();
    log_prices.push(level);
    for dx in increments {
        level += dx;
        log_prices.push(level);
    }
    let timestamps = (0..n_prices as i64).map(|k| k * i64::from(step)).collect();
    PriceSeries::from_log_prices(id, timestamps, log_prices)
}
