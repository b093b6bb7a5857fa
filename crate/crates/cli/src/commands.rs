//! The five commands. Each computes everything it needs before touching
//! the output directory, so a failure leaves no partial results behind.

use std::path::{Path, PathBuf};

use qcrit::estimation::{PowerLawFit, ScaleFitResult, ScalingReport};
use qcrit::io::{
    read_ccdf, read_fits, read_price_csv, write_ccdf_csv, write_ccdf_json, write_fits_csv,
    write_json, write_price_csv, write_scaling_json, write_table,
};
use qcrit::pipeline::{analyze_scale, ScaleAnalysis};
use qcrit::synth::qgaussian_walk;
use qcrit::table1::table1_csv;
use qcrit::{ccdf_abs, numerical_pdf, pdf, scaling_report, QGaussianParams};

use crate::config::{Format, RunConfig};
use crate::error::{usage, CliError, CliResult};

fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|source| {
        CliError::Core(qcrit::Error::Io {
            path: dir.to_path_buf(),
            source,
        })
    })
}

fn params(q: f64, beta: f64) -> CliResult<QGaussianParams> {
    QGaussianParams::new(q, beta).map_err(|e| match e {
        qcrit::Error::Domain(m) => CliError::Usage(m),
        other => CliError::Core(other),
    })
}

/// Files written by [`cmd_fit`].
#[derive(Debug, Clone)]
pub struct FitOutput {
    pub fits: Vec<ScaleFitResult>,
    pub table: PathBuf,
    pub plots: Vec<PathBuf>,
}

/// Fits every time scale of the ladder on the pooled inputs.
pub fn cmd_fit(config: &RunConfig) -> CliResult<FitOutput> {
    if config.inputs.is_empty() {
        return usage("fit needs at least one --input price file");
    }
    let series = config
        .inputs
        .iter()
        .map(|p| read_price_csv(p))
        .collect::<qcrit::Result<Vec<_>>>()?;
    let analyses = config
        .dt_ladder
        .iter()
        .map(|&dt| analyze_scale(&series, dt, &config.grid))
        .collect::<qcrit::Result<Vec<ScaleAnalysis>>>()?;
    let mut overlays = Vec::with_capacity(analyses.len());
    for a in &analyses {
        let model = QGaussianParams::new(a.fit.q, a.fit.beta)?;
        let rows = a
            .ccdf
            .thresholds
            .iter()
            .zip(&a.ccdf.probabilities)
            .map(|(x, p)| Ok(vec![*x, *p, ccdf_abs(&model, *x)?]))
            .collect::<qcrit::Result<Vec<_>>>()?;
        overlays.push(rows);
    }

    let dir = &config.out_dir;
    ensure_dir(dir)?;
    let ext = config.format.extension();
    let mut plots = Vec::new();
    for (a, rows) in analyses.iter().zip(&overlays) {
        let dt = a.fit.dt;
        let ccdf_path = dir.join(format!("ccdf_dt{dt}.{ext}"));
        match config.format {
            Format::Csv => write_ccdf_csv(&ccdf_path, &a.ccdf)?,
            Format::Json => write_ccdf_json(&ccdf_path, "pooled", &a.ccdf)?,
        }
        let overlay_path = dir.join(format!("fit_dt{dt}.csv"));
        write_table(&overlay_path, &["x", "ccdf_empirical", "ccdf_fitted"], rows)?;
        plots.push(ccdf_path);
        plots.push(overlay_path);
    }
    let fits: Vec<ScaleFitResult> = analyses.into_iter().map(|a| a.fit).collect();
    let table = dir.join(format!("fits.{ext}"));
    match config.format {
        Format::Csv => write_fits_csv(&table, &fits)?,
        Format::Json => write_json(&table, &fits)?,
    }
    Ok(FitOutput { fits, table, plots })
}

fn line_rows(xs: &[f64], ys: &[f64], fit: &PowerLawFit) -> Vec<Vec<f64>> {
    xs.iter()
        .zip(ys)
        .map(|(x, y)| vec![*x, *y, fit.predict(*x)])
        .collect()
}

/// Power-law regressions across the rows of a fits table.
pub fn cmd_scaling(fits_path: &Path, out_dir: &Path) -> CliResult<ScalingReport> {
    let mut fits = read_fits(fits_path)?;
    let report = scaling_report(&fits)?;
    fits.sort_by_key(|f| f.dt);
    let dt: Vec<f64> = fits.iter().map(|f| f64::from(f.dt)).collect();
    let qm1: Vec<f64> = fits.iter().map(|f| f.q - 1.0).collect();
    let inv_beta: Vec<f64> = fits.iter().map(|f| 1.0 / f.beta).collect();

    ensure_dir(out_dir)?;
    write_scaling_json(&out_dir.join("scaling.json"), &report)?;
    write_table(
        &out_dir.join("scaling_tau.csv"),
        &["dt", "q_minus_1", "q_minus_1_fitted"],
        &line_rows(&dt, &qm1, &report.tau_fit),
    )?;
    write_table(
        &out_dir.join("scaling_gamma.csv"),
        &["dt", "inv_beta", "inv_beta_fitted"],
        &line_rows(&dt, &inv_beta, &report.gamma_fit),
    )?;
    write_table(
        &out_dir.join("scaling_delta.csv"),
        &["q_minus_1", "inv_beta", "inv_beta_fitted"],
        &line_rows(&qm1, &inv_beta, &report.delta_fit),
    )?;
    Ok(report)
}

/// Writes the bundled reference table to `out_dir/table1.csv`.
pub fn cmd_table1(out_dir: &Path) -> CliResult<PathBuf> {
    ensure_dir(out_dir)?;
    let path = out_dir.join("table1.csv");
    std::fs::write(&path, table1_csv()).map_err(|source| qcrit::Error::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Options of [`cmd_synth`] beyond the shared settings.
#[derive(Debug, Clone)]
pub struct SynthSpec {
    pub q: f64,
    pub beta: f64,
    pub n: usize,
    pub id: String,
    pub step: u32,
}

/// A seeded q-Gaussian random walk written to `out_dir/<id>.csv`.
pub fn cmd_synth(config: &RunConfig, spec: &SynthSpec) -> CliResult<PathBuf> {
    let p = params(spec.q, spec.beta)?;
    if spec.n < 2 {
        return usage(format!("--n must be at least 2, got {}", spec.n));
    }
    if spec.step == 0 {
        return usage("--step must be positive");
    }
    if spec.id.is_empty() || spec.id.contains(['/', '\\']) {
        return usage(format!("invalid series id `{}`", spec.id));
    }
    let walk = qgaussian_walk(spec.id.clone(), &p, spec.n, spec.step, config.seed)?;
    ensure_dir(&config.out_dir)?;
    let path = config.out_dir.join(format!("{}.csv", spec.id));
    write_price_csv(&path, &walk)?;
    Ok(path)
}

/// Numerical density of a stored exceedance curve next to the folded model
/// density `2 pdf(x)`, written to `out_dir/pdf_<stem>.csv`.
pub fn cmd_pdfplot(ccdf_path: &Path, q: f64, beta: f64, out_dir: &Path) -> CliResult<PathBuf> {
    let p = params(q, beta)?;
    let (_, ccdf) = read_ccdf(ccdf_path, 0)?;
    let rows: Vec<Vec<f64>> = numerical_pdf(&ccdf)?
        .into_iter()
        .map(|(x, d)| vec![x, d, 2.0 * pdf(&p, x)])
        .collect();
    let stem = ccdf_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "ccdf".into());
    ensure_dir(out_dir)?;
    let path = out_dir.join(format!("pdf_{stem}.csv"));
    write_table(&path, &["x", "pdf_numeric", "pdf_model"], &rows)?;
    Ok(path)
}
