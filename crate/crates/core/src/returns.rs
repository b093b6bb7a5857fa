//! From prices to absolute normalized returns, their empirical exceedance
//! probabilities and a numerically differentiated density.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Time scales (in ticks) analysed by default.
pub const DEFAULT_DT_LADDER: [u32; 9] = [4, 8, 16, 30, 60, 120, 240, 390, 780];

/// A price series. Prices are kept as natural logarithms, which is all the
/// return computation needs and lets very large or very small prices
/// through without overflow.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    id: String,
    timestamps: Vec<i64>,
    log_values: Vec<f64>,
}

impl PriceSeries {
    /// Builds a series from raw positive prices.
    pub fn new(id: impl Into<String>, timestamps: Vec<i64>, values: &[f64]) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return domain(format!("prices must be positive and finite, got {bad}"));
        }
        Self::from_log_prices(id, timestamps, values.iter().map(|v| v.ln()).collect())
    }

    /// Builds a series from `ln W(t)` directly.
    pub fn from_log_prices(
        id: impl Into<String>,
        timestamps: Vec<i64>,
        log_values: Vec<f64>,
    ) -> Result<Self> {
        if timestamps.len() != log_values.len() {
            return domain(format!(
                "{} timestamps but {} prices",
                timestamps.len(),
                log_values.len()
            ));
        }
        if timestamps.len() < 2 {
            return Err(Error::InsufficientData(
                "a price series needs at least two samples".into(),
            ));
        }
        if timestamps.windows(2).any(|w| w[1] <= w[0]) {
            return domain("timestamps must be strictly increasing");
        }
        if log_values.iter().any(|v| !v.is_finite()) {
            return domain("log prices must be finite");
        }
        Ok(Self {
            id: id.into(),
            timestamps,
            log_values,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn timestamps(&self) -> &[i64] {
        &self.timestamps
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_values
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }
}

/// Log returns over a fixed horizon `dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    pub dt: u32,
    pub values: Vec<f64>,
}

/// Returns centered on their time average and scaled to unit variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedReturns {
    pub dt: u32,
    pub values: Vec<f64>,
    pub mean_removed: f64,
    pub volatility: f64,
    pub span: usize,
}

/// Threshold grid for the empirical exceedance probabilities.
///
/// With `max = None` the grid ends at the largest absolute return that
/// still has `min_exceedances` observations above it (capped at a tenth of
/// the sample), so the last few points are not single-count noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: Option<f64>,
    pub count: usize,
    pub min_exceedances: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            min: 1e-2,
            max: None,
            count: 60,
            min_exceedances: 100,
        }
    }
}

impl GridSpec {
    /// Upper end of the grid for sorted absolute returns.
    pub fn upper_end(&self, sorted_abs: &[f64]) -> f64 {
        match self.max {
            Some(max) => max,
            None => {
                let n = sorted_abs.len();
                let keep = self.min_exceedances.min(n / 10);
                sorted_abs[n - 1 - keep]
            }
        }
    }

    /// Log-spaced thresholds ending at `max`, or at `upper` when no explicit
    /// upper end was given.
    pub fn thresholds(&self, upper: f64) -> Result<Vec<f64>> {
        let max = self.max.unwrap_or(upper);
        if self.count < 2 {
            return domain(format!("grid needs at least 2 points, got {}", self.count));
        }
        if !(self.min > 0.0 && self.min.is_finite() && max.is_finite()) || self.min >= max {
            return domain(format!("invalid grid range [{}, {max}]", self.min));
        }
        Ok(log_space(self.min, max, self.count))
    }
}

/// `count` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (count - 1) as f64;
    (0..count)
        .map(|i| match i {
            0 => lo,
            i if i == count - 1 => hi,
            i => (a + step * i as f64).exp(),
        })
        .collect()
}

/// Exceedance probabilities `P(|r| > x_i)` on a threshold grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCCDF {
    pub dt: u32,
    pub thresholds: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub n_samples: usize,
}

impl EmpiricalCCDF {
    /// Wraps existing points after checking the ordering invariants.
    pub fn from_points(
        dt: u32,
        thresholds: Vec<f64>,
        probabilities: Vec<f64>,
        n_samples: usize,
    ) -> Result<Self> {
        if thresholds.len() != probabilities.len() {
            return domain("thresholds and probabilities differ in length");
        }
        if thresholds.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return domain("thresholds must be positive and finite");
        }
        if thresholds.windows(2).any(|w| w[1] <= w[0]) {
            return domain("thresholds must be strictly increasing");
        }
        if probabilities.iter().any(|p| !(*p > 0.0 && *p <= 1.0)) {
            return domain("probabilities must lie in (0, 1]");
        }
        if probabilities.windows(2).any(|w| w[1] > w[0]) {
            return domain("probabilities must be non-increasing");
        }
        Ok(Self {
            dt,
            thresholds,
            probabilities,
            n_samples,
        })
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }
}

/// `R(t) = ln W(t + dt) - ln W(t)` over every pair of samples exactly `dt`
/// ticks apart.
pub fn log_returns(series: &PriceSeries, dt: u32) -> Result<ReturnSeries> {
    if dt == 0 || dt as usize >= series.len() {
        return domain(format!(
            "dt = {dt} must be positive and below the series length {}",
            series.len()
        ));
    }
    let ts = &series.timestamps;
    let lv = &series.log_values;
    let mut values = Vec::with_capacity(series.len() - dt as usize);
    let mut j = 0;
    for (i, &t) in ts.iter().enumerate() {
        let target = t + i64::from(dt);
        while j < ts.len() && ts[j] < target {
            j += 1;
        }
        if j == ts.len() {
            break;
        }
        if ts[j] == target {
            values.push(lv[j] - lv[i]);
        }
    }
    Ok(ReturnSeries { dt, values })
}

/// Removes the mean and divides by the population standard deviation.
pub fn normalize(returns: &ReturnSeries) -> Result<NormalizedReturns> {
    let values = &returns.values;
    if values.len() < 2 {
        return Err(Error::Degenerate(format!(
            "need at least two returns at dt = {}, got {}",
            returns.dt,
            values.len()
        )));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if sd.is_nan() || sd <= 1e-14 * scale {
        return Err(Error::Degenerate(format!(
            "returns at dt = {} have zero variance",
            returns.dt
        )));
    }
    Ok(NormalizedReturns {
        dt: returns.dt,
        values: values.iter().map(|v| (v - mean) / sd).collect(),
        mean_removed: mean,
        volatility: sd,
        span: values.len(),
    })
}

/// Concatenates per-instrument normalized returns and renormalizes the
/// pooled sample. Inputs are taken in the order given.
pub fn pool(parts: &[NormalizedReturns]) -> Result<NormalizedReturns> {
    let first = parts
        .first()
        .ok_or_else(|| Error::InsufficientData("nothing to pool".into()))?;
    if let Some(bad) = parts.iter().find(|p| p.dt != first.dt) {
        return domain(format!(
            "cannot pool dt = {} with dt = {}",
            first.dt, bad.dt
        ));
    }
    if parts.len() == 1 {
        return Ok(first.clone());
    }
    let values: Vec<f64> = parts
        .iter()
        .flat_map(|p| p.values.iter().copied())
        .collect();
    normalize(&ReturnSeries {
        dt: first.dt,
        values,
    })
}

/// Fraction of `|r|` strictly above each grid threshold; thresholds with no
/// exceedances are dropped.
pub fn empirical_ccdf(returns: &NormalizedReturns, grid: &GridSpec) -> Result<EmpiricalCCDF> {
    if returns.values.is_empty() {
        return Err(Error::InsufficientData("no returns".into()));
    }
    let mut abs: Vec<f64> = returns.values.iter().map(|v| v.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let n = abs.len();
    let thresholds = grid.thresholds(grid.upper_end(&abs))?;
    let mut xs = Vec::with_capacity(thresholds.len());
    let mut ps = Vec::with_capacity(thresholds.len());
    for x in thresholds {
        let above = n - abs.partition_point(|v| *v <= x);
        if above == 0 {
            continue;
        }
        xs.push(x);
        ps.push(above as f64 / n as f64);
    }
    Ok(EmpiricalCCDF {
        dt: returns.dt,
        thresholds: xs,
        probabilities: ps,
        n_samples: n,
    })
}

/// Density of `|r|` from finite differences of the exceedance probability,
/// `-(P_{i+1} - P_i) / (x_{i+1} - x_i)`, reported at the geometric midpoint
/// of each pair of thresholds.
pub fn numerical_pdf(ccdf: &EmpiricalCCDF) -> Result<Vec<(f64, f64)>> {
    if ccdf.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "numerical density needs at least 3 points, got {}",
            ccdf.len()
        )));
    }
    Ok(ccdf
        .thresholds
        .windows(2)
        .zip(ccdf.probabilities.windows(2))
        .map(|(x, p)| {
            let density = ((p[0] - p[1]) / (x[1] - x[0])).max(0.0);
            ((x[0] * x[1]).sqrt(), density)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: &[f64]) -> PriceSeries {
        PriceSeries::new("t", (0..values.len() as i64).collect(), values).unwrap()
    }

    #[test]
    fn constant_prices_give_zero_returns() {
        let r = log_returns(&series(&[100.0; 10]), 1).unwrap();
        assert_eq!(r.values, vec![0.0; 9]);
    }

    #[test]
    fn log_linear_prices() {
        let w: Vec<f64> = (0..50).map(|t| (0.01 * t as f64).exp()).collect();
        let r = log_returns(&series(&w), 5).unwrap();
        assert_eq!(r.values.len(), 45);
        assert!(r.values.iter().all(|v| (v - 0.05).abs() < 1e-14));
    }

    #[test]
    fn two_point_return() {
        let r = log_returns(&series(&[100.0, 101.0]), 1).unwrap();
        assert!((r.values[0] - 1.01f64.ln()).abs() < 1e-15);
        assert!((r.values[0] - 0.00995033).abs() < 1e-8);
    }

    #[test]
    fn log_returns_errors() {
        assert!(log_returns(&series(&[1.0, 2.0, 3.0]), 3).is_err());
        assert!(log_returns(&series(&[1.0, 2.0, 3.0]), 0).is_err());
        assert!(PriceSeries::new("x", vec![0, 1], &[1.0, 0.0]).is_err());
        assert!(PriceSeries::new("x", vec![0, 1], &[1.0, -3.0]).is_err());
        assert!(PriceSeries::new("x", vec![0], &[1.0]).is_err());
        assert!(PriceSeries::new("x", vec![1, 1], &[1.0, 2.0]).is_err());
        assert!(PriceSeries::new("x", vec![0, 1, 2], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn gaps_only_pair_exact_offsets() {
        let s = PriceSeries::new("g", vec![0, 1, 2, 5, 6], &[1.0, 2.0, 4.0, 8.0, 16.0]).unwrap();
        let r = log_returns(&s, 1).unwrap();
        // pairs (0,1), (1,2), (5,6)
        assert_eq!(r.values.len(), 3);
        let r4 = log_returns(&s, 4).unwrap();
        // pairs (1,5), (2,6)
        assert_eq!(r4.values.len(), 2);
        assert!((r4.values[0] - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn normalize_two_values() {
        let n = normalize(&ReturnSeries {
            dt: 1,
            values: vec![1.0, 3.0],
        })
        .unwrap();
        assert_eq!(n.values, vec![-1.0, 1.0]);
        assert_eq!(n.mean_removed, 2.0);
        assert_eq!(n.volatility, 1.0);
        assert_eq!(n.span, 2);
    }

    #[test]
    fn normalize_rejects_constant() {
        let err = normalize(&ReturnSeries {
            dt: 1,
            values: vec![0.0; 3],
        });
        assert!(matches!(err, Err(Error::Degenerate(_))));
        let err = normalize(&ReturnSeries {
            dt: 1,
            values: vec![0.05; 30],
        });
        assert!(matches!(err, Err(Error::Degenerate(_))));
    }

    #[test]
    fn pool_rules() {
        let a = normalize(&ReturnSeries {
            dt: 4,
            values: vec![1.0, 2.0, 4.0, 8.0],
        })
        .unwrap();
        assert_eq!(pool(std::slice::from_ref(&a)).unwrap(), a);
        let doubled = pool(&[a.clone(), a.clone()]).unwrap();
        assert_eq!(doubled.span, 8);
        let mut sorted_a = a.values.clone();
        sorted_a.sort_by(f64::total_cmp);
        let mut sorted_d = doubled.values.clone();
        sorted_d.sort_by(f64::total_cmp);
        for (i, v) in sorted_a.iter().enumerate() {
            assert!((sorted_d[2 * i] - v).abs() < 1e-12);
            assert!((sorted_d[2 * i + 1] - v).abs() < 1e-12);
        }
        let mut other = a.clone();
        other.dt = 8;
        assert!(pool(&[a, other]).is_err());
        assert!(pool(&[]).is_err());
    }

    #[test]
    fn ccdf_counting() {
        let r = NormalizedReturns {
            dt: 1,
            values: vec![0.5, -1.5, 2.5, -3.5],
            mean_removed: 0.0,
            volatility: 1.0,
            span: 4,
        };
        let grid = GridSpec {
            min: 0.1,
            max: Some(1.0),
            count: 2,
            min_exceedances: 100,
        };
        let c = empirical_ccdf(&r, &grid).unwrap();
        assert_eq!(c.thresholds, vec![0.1, 1.0]);
        assert_eq!(c.probabilities, vec![1.0, 0.75]);
        // small samples: the default grid ends at the sample maximum, which
        // has no exceedances
        let c = empirical_ccdf(&r, &GridSpec::default()).unwrap();
        assert_eq!(c.len(), 59);
        assert!(c.thresholds.last().unwrap() < &3.5);
    }

    #[test]
    fn default_grid_stops_short_of_sparse_tail() {
        let values: Vec<f64> = (1..=10_000).map(|i| f64::from(i) / 1000.0).collect();
        let r = NormalizedReturns {
            dt: 1,
            values,
            mean_removed: 0.0,
            volatility: 1.0,
            span: 10_000,
        };
        let c = empirical_ccdf(&r, &GridSpec::default()).unwrap();
        assert_eq!(c.len(), 60);
        assert_eq!(*c.thresholds.last().unwrap(), 9.9);
        assert_eq!(*c.probabilities.last().unwrap(), 0.01);
    }

    #[test]
    fn grid_validation() {
        let r = NormalizedReturns {
            dt: 1,
            values: vec![0.5, 1.0],
            mean_removed: 0.0,
            volatility: 1.0,
            span: 2,
        };
        let bad = [
            GridSpec {
                min: 1.0,
                max: Some(1.0),
                count: 10,
                min_exceedances: 1,
            },
            GridSpec {
                min: 2.0,
                max: Some(1.0),
                count: 10,
                min_exceedances: 1,
            },
            GridSpec {
                min: 0.1,
                max: Some(1.0),
                count: 1,
                min_exceedances: 1,
            },
            GridSpec {
                min: 0.0,
                max: Some(1.0),
                count: 10,
                min_exceedances: 1,
            },
        ];
        for g in bad {
            assert!(empirical_ccdf(&r, &g).is_err(), "{g:?}");
        }
    }

    #[test]
    fn linear_ccdf_has_unit_density() {
        let xs: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
        let ps: Vec<f64> = xs.iter().map(|x| 1.0 - x).collect();
        let c = EmpiricalCCDF::from_points(1, xs, ps, 100).unwrap();
        let d = numerical_pdf(&c).unwrap();
        assert_eq!(d.len(), 8);
        assert!(d.iter().all(|(_, f)| (f - 1.0).abs() < 1e-12));
    }

    #[test]
    fn numerical_pdf_needs_three_points() {
        let c = EmpiricalCCDF::from_points(1, vec![1.0, 2.0], vec![0.5, 0.25], 10).unwrap();
        assert!(numerical_pdf(&c).is_err());
    }

    #[test]
    fn from_points_checks_invariants() {
        assert!(EmpiricalCCDF::from_points(1, vec![1.0, 0.5], vec![0.5, 0.2], 1).is_err());
        assert!(EmpiricalCCDF::from_points(1, vec![1.0, 2.0], vec![0.2, 0.5], 1).is_err());
        assert!(EmpiricalCCDF::from_points(1, vec![1.0, 2.0], vec![0.5, 0.0], 1).is_err());
        assert!(EmpiricalCCDF::from_points(1, vec![1.0], vec![0.5, 0.2], 1).is_err());
    }
}
