//! q-Gaussian modelling of absolute normalized returns across time scales.
//!
//! The pipeline runs prices → log returns at horizon `dt` → normalized
//! returns → empirical exceedance curve `P(|r| > x)` → least-squares
//! `(q, β)` fit, and finally power-law regressions of `q - 1` and `1/β`
//! against `dt` and against each other.

pub mod error;
pub mod estimation;
pub mod io;
pub mod pipeline;
pub mod qgaussian;
pub mod returns;
pub mod special;
pub mod synth;
pub mod table1;

pub use error::{Error, Result};
pub use estimation::{
    estimate_tail_exponent, fit_power_law, fit_qgaussian_ccdf, scaling_report, PowerLawFit,
    ScaleFitResult, ScalingReport,
};
pub use pipeline::{analyze_scale, pooled_returns, ScaleAnalysis};
pub use qgaussian::{
    ccdf_abs, exp_q, normalization, pdf, q_to_tail, sample, tail_to_q, QGaussianParams,
    TailExponent,
};
pub use returns::{
    empirical_ccdf, log_returns, normalize, numerical_pdf, pool, EmpiricalCCDF, GridSpec,
    NormalizedReturns, PriceSeries, ReturnSeries, DEFAULT_DT_LADDER,
};
