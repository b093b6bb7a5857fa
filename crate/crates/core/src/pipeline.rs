//! One time scale end to end: prices to a fitted exceedance curve.

use crate::error::{Error, Result};
use crate::estimation::{fit_qgaussian_ccdf, ScaleFitResult};
use crate::returns::{
    empirical_ccdf, log_returns, normalize, pool, EmpiricalCCDF, GridSpec, NormalizedReturns,
    PriceSeries,
};

/// Empirical curve and fit for one `dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleAnalysis {
    pub ccdf: EmpiricalCCDF,
    pub fit: ScaleFitResult,
}

/// Normalized returns of every series at `dt`, pooled. Series too short to
/// yield two returns at this horizon are skipped.
pub fn pooled_returns(series: &[PriceSeries], dt: u32) -> Result<NormalizedReturns> {
    let mut parts = Vec::with_capacity(series.len());
    for s in series {
        if dt as usize >= s.len() {
            continue;
        }
        let r = log_returns(s, dt)?;
        if r.values.len() < 2 {
            continue;
        }
        parts.push(normalize(&r).map_err(|e| match e {
            Error::Degenerate(m) => Error::Degenerate(format!("{}: {m}", s.id())),
            other => other,
        })?);
    }
    if parts.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no series has two returns at dt = {dt}"
        )));
    }
    pool(&parts)
}

/// Pools the returns at `dt`, builds the exceedance curve on `grid` and fits
/// a q-Gaussian to it.
pub fn analyze_scale(series: &[PriceSeries], dt: u32, grid: &GridSpec) -> Result<ScaleAnalysis> {
    let pooled = pooled_returns(series, dt)?;
    let ccdf = empirical_ccdf(&pooled, grid)?;
    let fit = fit_qgaussian_ccdf(&ccdf, None)?;
    Ok(ScaleAnalysis { ccdf, fit })
}
