//! File formats: price CSVs, exceedance curves (CSV or JSON), fit tables,
//! scaling reports and plain numeric plot tables.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{ScaleFitResult, ScalingReport};
use crate::returns::{EmpiricalCCDF, PriceSeries};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => parse_err(path, format!("{other:?}")),
    }
}

/// `ln` of a positive decimal such as `101.25` or `3.2e-450`. Mantissa and
/// exponent are split so that prices outside the `f64` range still parse.
pub fn parse_log_price(text: &str) -> Option<f64> {
    let text = text.trim();
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let m: f64 = mantissa.parse().ok()?;
    if !(m > 0.0 && m.is_finite()) {
        return None;
    }
    Some(m.ln() + f64::from(exponent) * std::f64::consts::LN_10)
}

/// Decimal text for `exp(log_price)`, written as `<mantissa>e<exponent>`.
pub fn format_log_price(log_price: f64) -> String {
    let ln10 = std::f64::consts::LN_10;
    let mut exponent = (log_price / ln10).floor();
    let mut mantissa = (log_price - exponent * ln10).exp();
    if mantissa >= 10.0 {
        mantissa /= 10.0;
        exponent += 1.0;
    } else if mantissa < 1.0 {
        mantissa *= 10.0;
        exponent -= 1.0;
    }
    format!("{mantissa}e{exponent}")
}

/// Reads a `timestamp,price` CSV; the series id is the file stem.
pub fn read_price_csv(path: &Path) -> Result<PriceSeries> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::Reader::from_reader(file);
    let headers = reader.headers().map_err(|e| csv_err(path, e))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| parse_err(path, format!("missing column `{name}`")))
    };
    let (ti, pi) = (column("timestamp")?, column("price")?);
    let mut timestamps = Vec::new();
    let mut log_prices = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let row = line + 2;
        let t = record
            .get(ti)
            .and_then(|s| s.trim().parse::<i64>().ok())
            .ok_or_else(|| parse_err(path, format!("row {row}: bad timestamp")))?;
        let p = record.get(pi).and_then(parse_log_price).ok_or_else(|| {
            parse_err(path, format!("row {row}: price must be a positive decimal"))
        })?;
        timestamps.push(t);
        log_prices.push(p);
    }
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    PriceSeries::from_log_prices(id, timestamps, log_prices).map_err(|e| match e {
        Error::Domain(m) | Error::InsufficientData(m) => parse_err(path, m),
        other => other,
    })
}

pub fn write_price_csv(path: &Path, series: &PriceSeries) -> Result<()> {
    let mut out = create(path)?;
    let mut body = String::with_capacity(series.len() * 32);
    body.push_str("timestamp,price\n");
    for (t, lp) in series.timestamps().iter().zip(series.log_values()) {
        body.push_str(&format!("{t},{}\n", format_log_price(*lp)));
    }
    out.write_all(body.as_bytes()).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(io_err(path))?))
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

#[derive(Debug, Serialize, Deserialize)]
struct CcdfJson {
    id: String,
    dt: u32,
    x: Vec<f64>,
    ccdf: Vec<f64>,
    n_samples: usize,
}

pub fn write_ccdf_csv(path: &Path, ccdf: &EmpiricalCCDF) -> Result<()> {
    let rows: Vec<Vec<f64>> = ccdf
        .thresholds
        .iter()
        .zip(&ccdf.probabilities)
        .map(|(x, p)| vec![*x, *p, ccdf.n_samples as f64])
        .collect();
    write_table(path, &["x", "ccdf", "n_samples"], &rows)
}

pub fn write_ccdf_json(path: &Path, id: &str, ccdf: &EmpiricalCCDF) -> Result<()> {
    let doc = CcdfJson {
        id: id.to_string(),
        dt: ccdf.dt,
        x: ccdf.thresholds.clone(),
        ccdf: ccdf.probabilities.clone(),
        n_samples: ccdf.n_samples,
    };
    write_json(path, &doc)
}

/// Reads an exceedance curve from CSV (`x,ccdf,n_samples`) or JSON, chosen
/// by extension. CSV carries no time scale, so `dt` fills it in.
pub fn read_ccdf(path: &Path, dt: u32) -> Result<(String, EmpiricalCCDF)> {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let bad = |e: Error| match e {
        Error::Domain(m) => parse_err(path, m),
        other => other,
    };
    if is_json(path) {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let doc: CcdfJson =
            serde_json::from_str(&text).map_err(|e| parse_err(path, e.to_string()))?;
        let ccdf =
            EmpiricalCCDF::from_points(doc.dt, doc.x, doc.ccdf, doc.n_samples).map_err(bad)?;
        return Ok((doc.id, ccdf));
    }
    #[derive(Deserialize)]
    struct Row {
        x: f64,
        ccdf: f64,
        #[serde(default)]
        n_samples: Option<f64>,
    }
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::Reader::from_reader(file);
    let (mut xs, mut ps, mut n) = (Vec::new(), Vec::new(), 0usize);
    for row in reader.deserialize::<Row>() {
        let row = row.map_err(|e| csv_err(path, e))?;
        xs.push(row.x);
        ps.push(row.ccdf);
        if let Some(count) = row.n_samples {
            n = count as usize;
        }
    }
    Ok((
        stem,
        EmpiricalCCDF::from_points(dt, xs, ps, n).map_err(bad)?,
    ))
}

pub fn write_fits_csv(path: &Path, fits: &[ScaleFitResult]) -> Result<()> {
    let mut out = create(path)?;
    let mut body = String::from("dt,q,beta,residual,n_points,converged\n");
    for f in fits {
        body.push_str(&format!(
            "{},{},{},{},{},{}\n",
            f.dt, f.q, f.beta, f.residual, f.n_points, f.converged
        ));
    }
    out.write_all(body.as_bytes()).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

/// Reads fit rows from JSON (an array of results) or CSV with at least the
/// columns `dt,q,beta`.
pub fn read_fits(path: &Path) -> Result<Vec<ScaleFitResult>> {
    if is_json(path) {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        return serde_json::from_str(&text).map_err(|e| parse_err(path, e.to_string()));
    }
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::Reader::from_reader(file);
    reader
        .deserialize::<ScaleFitResult>()
        .map(|r| r.map_err(|e| csv_err(path, e)))
        .collect()
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n").map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

pub fn write_scaling_json(path: &Path, report: &ScalingReport) -> Result<()> {
    write_json(path, report)
}

pub fn read_scaling_json(path: &Path) -> Result<ScalingReport> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, e.to_string()))
}

/// Plain numeric table with a header row.
pub fn write_table(path: &Path, headers: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut out = create(path)?;
    let mut body = headers.join(",");
    body.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        body.push_str(&cells.join(","));
        body.push('\n');
    }
    out.write_all(body.as_bytes()).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

/// Reads a numeric table written by [`write_table`].
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::Reader::from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| csv_err(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let row = record
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| parse_err(path, e.to_string()))?;
        rows.push(row);
    }
    Ok((headers, rows))
}

/// `dir/name`
pub fn output_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}
