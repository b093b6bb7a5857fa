//! Run settings: defaults, an optional `key=value` file, then flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qcrit::{GridSpec, DEFAULT_DT_LADDER};
use serde::Serialize;

use crate::error::{usage, CliResult};

pub const MIN_GRID_COUNT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}`, expected csv or json")),
        }
    }
}

/// Settings shared by all commands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub dt_ladder: Vec<u32>,
    pub grid: GridSpec,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            dt_ladder: DEFAULT_DT_LADDER.to_vec(),
            grid: GridSpec::default(),
            out_dir: PathBuf::from("."),
            seed: 0,
            format: Format::Csv,
        }
    }
}

/// Values given explicitly, on the command line or in a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub inputs: Option<Vec<PathBuf>>,
    pub dt_ladder: Option<Vec<u32>>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_count: Option<usize>,
    pub grid_min_exceedances: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

impl Overrides {
    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            inputs: self.inputs.or(base.inputs),
            dt_ladder: self.dt_ladder.or(base.dt_ladder),
            grid_min: self.grid_min.or(base.grid_min),
            grid_max: self.grid_max.or(base.grid_max),
            grid_count: self.grid_count.or(base.grid_count),
            grid_min_exceedances: self.grid_min_exceedances.or(base.grid_min_exceedances),
            out_dir: self.out_dir.or(base.out_dir),
            seed: self.seed.or(base.seed),
            format: self.format.or(base.format),
        }
    }

    /// Parses `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn parse_file_text(text: &str) -> CliResult<Overrides> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return usage(format!("config line {}: expected key = value", i + 1));
            };
            map.insert(key.trim().replace('-', "_"), value.trim().to_string());
        }
        let mut o = Overrides::default();
        for (key, value) in map {
            let bad = |e: String| usage::<()>(format!("config key `{key}`: {e}")).unwrap_err();
            match key.as_str() {
                "input" | "inputs" => {
                    o.inputs = Some(value.split(',').map(|s| PathBuf::from(s.trim())).collect())
                }
                "dt" | "dt_ladder" => o.dt_ladder = Some(parse_dt_list(&value).map_err(bad)?),
                "grid_min" => o.grid_min = Some(parse_num(&value).map_err(bad)?),
                "grid_max" => o.grid_max = Some(parse_num(&value).map_err(bad)?),
                "grid_count" => o.grid_count = Some(parse_num(&value).map_err(bad)?),
                "grid_min_exceedances" => {
                    o.grid_min_exceedances = Some(parse_num(&value).map_err(bad)?)
                }
                "out" | "out_dir" => o.out_dir = Some(PathBuf::from(value)),
                "seed" => o.seed = Some(parse_num(&value).map_err(bad)?),
                "format" => o.format = Some(value.parse().map_err(bad)?),
                _ => return usage(format!("unknown config key `{key}`")),
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> CliResult<Overrides> {
        let text = std::fs::read_to_string(path).map_err(|source| qcrit::Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_file_text(&text)
    }

    /// Fills the gaps from the defaults and checks the invariants.
    pub fn resolve(self) -> CliResult<RunConfig> {
        let d = RunConfig::default();
        let grid = GridSpec {
            min: self.grid_min.unwrap_or(d.grid.min),
            max: self.grid_max.or(d.grid.max),
            count: self.grid_count.unwrap_or(d.grid.count),
            min_exceedances: self.grid_min_exceedances.unwrap_or(d.grid.min_exceedances),
        };
        let config = RunConfig {
            inputs: self.inputs.unwrap_or(d.inputs),
            dt_ladder: self.dt_ladder.unwrap_or(d.dt_ladder),
            grid,
            out_dir: self.out_dir.unwrap_or(d.out_dir),
            seed: self.seed.unwrap_or(d.seed),
            format: self.format.unwrap_or(d.format),
        };
        config.validate()?;
        Ok(config)
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.dt_ladder.is_empty() {
            return usage("the dt ladder is empty");
        }
        if self.dt_ladder.contains(&0) {
            return usage("time scales must be positive");
        }
        if self.dt_ladder.windows(2).any(|w| w[1] <= w[0]) {
            return usage("the dt ladder must be strictly increasing");
        }
        let g = &self.grid;
        if g.count < MIN_GRID_COUNT {
            return usage(format!("grid count must be at least {MIN_GRID_COUNT}"));
        }
        if !(g.min > 0.0 && g.min.is_finite()) {
            return usage("grid minimum must be positive");
        }
        if let Some(max) = g.max {
            if !(max > g.min && max.is_finite()) {
                return usage("grid maximum must exceed the grid minimum");
            }
        }
        Ok(())
    }
}

fn parse_num<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse().map_err(|e: T::Err| e.to_string())
}

/// `4,8,16` into a list of time scales.
pub fn parse_dt_list(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|e| format!("bad time scale `{}`: {e}", part.trim()))
        })
        .collect()
}
