//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{cmd_fit, cmd_pdfplot, cmd_scaling, cmd_synth, cmd_table1, SynthSpec};
use crate::config::{parse_dt_list, Format, Overrides, RunConfig};
use crate::error::{usage, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "qcrit",
    version,
    about = "q-Gaussian fits of absolute normalized returns across time scales"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone)]
struct Ladder(Vec<u32>);

fn parse_ladder(s: &str) -> Result<Ladder, String> {
    parse_dt_list(s).map(Ladder)
}

#[derive(Debug, Args)]
struct Shared {
    /// Input files
    #[arg(long = "input", num_args = 1..)]
    inputs: Vec<PathBuf>,
    /// Comma-separated time scales, strictly increasing
    #[arg(long, value_parser = parse_ladder)]
    dt: Option<Ladder>,
    #[arg(long)]
    grid_min: Option<f64>,
    /// Upper grid end; by default the largest |r| with enough exceedances
    #[arg(long)]
    grid_max: Option<f64>,
    #[arg(long)]
    grid_count: Option<usize>,
    /// Exceedances required at the default upper grid end
    #[arg(long)]
    grid_min_exceedances: Option<usize>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    format: Option<Format>,
    /// key=value file; explicit flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Shared {
    fn resolve(self) -> CliResult<RunConfig> {
        let flags = Overrides {
            inputs: (!self.inputs.is_empty()).then_some(self.inputs),
            dt_ladder: self.dt.map(|l| l.0),
            grid_min: self.grid_min,
            grid_max: self.grid_max,
            grid_count: self.grid_count,
            grid_min_exceedances: self.grid_min_exceedances,
            out_dir: self.out,
            seed: self.seed,
            format: self.format,
        };
        let file = match &self.config {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        flags.over(file).resolve()
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a q-Gaussian to the pooled returns at every time scale
    Fit(Shared),
    /// Power laws of q - 1 and 1/beta across a fits table (given by --input)
    Scaling(Shared),
    /// Write the bundled reference table
    Table1(Shared),
    /// Generate a random walk with q-Gaussian log increments
    Synth {
        #[command(flatten)]
        shared: Shared,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        beta: f64,
        /// Number of prices
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "synth")]
        id: String,
        /// Tick spacing between prices
        #[arg(long, default_value_t = 1)]
        step: u32,
    },
    /// Numerical density of a stored curve (given by --input) against the model
    Pdfplot {
        #[command(flatten)]
        shared: Shared,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        beta: f64,
    },
}

fn single_input(config: &RunConfig, what: &str) -> CliResult<PathBuf> {
    match config.inputs.as_slice() {
        [one] => Ok(one.clone()),
        _ => usage(format!("{what} takes exactly one --input file")),
    }
}

fn dispatch(command: Command) -> CliResult<String> {
    match command {
        Command::Fit(shared) => {
            let config = shared.resolve()?;
            let out = cmd_fit(&config)?;
            let mut msg = String::new();
            for f in &out.fits {
                let flag = if f.converged { "" } else { "  (not converged)" };
                msg.push_str(&format!(
                    "dt={:<5} q={:.4} beta={:.4}{flag}\n",
                    f.dt, f.q, f.beta
                ));
            }
            msg.push_str(&format!("wrote {}", out.table.display()));
            Ok(msg)
        }
        Command::Scaling(shared) => {
            let config = shared.resolve()?;
            let input = single_input(&config, "scaling")?;
            let r = cmd_scaling(&input, &config.out_dir)?;
            Ok(format!(
                "tau   = {:.4} ± {:.4}\ngamma = {:.4} ± {:.4}\ndelta = {:.4} ± {:.4}",
                r.tau_fit.exponent,
                r.tau_fit.exponent_stderr,
                r.gamma_fit.exponent,
                r.gamma_fit.exponent_stderr,
                r.delta_fit.exponent,
                r.delta_fit.exponent_stderr
            ))
        }
        Command::Table1(shared) => {
            let config = shared.resolve()?;
            Ok(format!("wrote {}", cmd_table1(&config.out_dir)?.display()))
        }
        Command::Synth {
            shared,
            q,
            beta,
            n,
            id,
            step,
        } => {
            let config = shared.resolve()?;
            let spec = SynthSpec {
                q,
                beta,
                n,
                id,
                step,
            };
            Ok(format!("wrote {}", cmd_synth(&config, &spec)?.display()))
        }
        Command::Pdfplot { shared, q, beta } => {
            let config = shared.resolve()?;
            let input = single_input(&config, "pdfplot")?;
            Ok(format!(
                "wrote {}",
                cmd_pdfplot(&input, q, beta, &config.out_dir)?.display()
            ))
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(msg) => {
            println!("{msg}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
