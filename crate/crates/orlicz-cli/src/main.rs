//! Command-line surface for the approximation quantities of diagonal
//! operators in Orlicz sequence spaces.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid usage or
//! inputs, 3 hypothesis or truncation errors from the computation.

mod commands;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use orlicz::nterm::{SearchMode, SearchPolicy};
use orlicz::widths::DiagonalOperator;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(orlicz::Error),
}

impl From<orlicz::Error> for CliError {
    fn from(e: orlicz::Error) -> Self {
        // invalid user inputs are usage errors; violated math hypotheses,
        // truncation and scale guards are computation errors
        match e {
            orlicz::Error::InvalidGauge(_)
            | orlicz::Error::InvalidIndexSet(_)
            | orlicz::Error::InvalidWeights(_)
            | orlicz::Error::NegativeArgument(_)
            | orlicz::Error::NonpositiveScale(_) => CliError::Usage(e.to_string()),
            other => CliError::Math(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Math(_) => 3,
        }
    }

    fn report(&self) {
        match self {
            CliError::Usage(msg) => eprintln!("error: {msg}"),
            CliError::Math(err) => {
                eprintln!("error: {err}");
                let report = match err {
                    orlicz::Error::Hypothesis { report, .. } => report.as_ref(),
                    orlicz::Error::ComposedGaugeNotOrlicz(report) => Some(report),
                    _ => None,
                };
                if let Some(report) = report {
                    eprintln!("condition report: {report}");
                }
            }
        }
    }
}

#[derive(Parser)]
#[command(
    name = "orlicz-cli",
    about = "Exact approximation quantities of diagonal operators in Orlicz sequence spaces",
    long_about = None,
    after_help = "GAUGES:    power:p=<v> | exp_minus_one | power_log:p=<v> | spline:<path>\n\
                  WEIGHTS:   power-decay:beta=<b> | geometric:q=<q> | csv:<path>\n\
                  RANGES:    inclusive, e.g. 0..5 or a single integer\n\
                  Spline files: one `t,value` per line, first line `0,0`, convex.\n\
                  Weight/sequence CSV files: one value per line."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Luxemburg norm of a sequence read from a CSV file
    Norm {
        /// Gauge spec, e.g. power:p=2
        #[arg(long)]
        orlicz: String,
        /// Sequence file, one value per line
        #[arg(long)]
        input: PathBuf,
        /// Also report the tail norm after zeroing these indices, e.g. 1,3
        #[arg(long)]
        gamma: Option<String>,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Characteristic sequences (levels, level sets, counts) of a weight family
    Charseq {
        /// Weight spec, e.g. power-decay:beta=1
        #[arg(long)]
        weights: String,
        /// Truncation dimension
        #[arg(long)]
        d: usize,
        /// Declared bound on weights beyond the truncation (CSV weights only)
        #[arg(long)]
        tail_bound: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exact width values: best approximation over a set, basis widths, Kolmogorov widths
    Widths {
        #[arg(long)]
        weights: String,
        /// Source gauge spec
        #[arg(long)]
        orlicz: String,
        /// Target gauge spec (defaults to the source)
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        tail_bound: Option<f64>,
        /// Kolmogorov width orders, e.g. 0..5 (source and target must agree)
        #[arg(long)]
        m_range: Option<String>,
        /// Basis width orders, e.g. 0..5
        #[arg(long)]
        n_range: Option<String>,
        /// Characteristic-level orders (1-based), e.g. 1..3: the best
        /// approximation on each level set
        #[arg(long)]
        level_range: Option<String>,
        /// Best approximation over this fixed index set, e.g. 1,3
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Best n-term approximation of the image of the unit l_p ball
    Sigma {
        #[arg(long)]
        weights: String,
        #[arg(long)]
        orlicz: String,
        /// Exponent of the source l_p space
        #[arg(long)]
        p: f64,
        /// Single order
        #[arg(long)]
        n: Option<usize>,
        /// Range of orders, e.g. 0..4
        #[arg(long)]
        n_range: Option<String>,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        tail_bound: Option<f64>,
        /// Cap on the scanned support size (defaults to d)
        #[arg(long)]
        s_cap: Option<usize>,
        /// Use the patience-based scan and report certified=false
        #[arg(long)]
        heuristic: bool,
        /// Non-improving steps tolerated in heuristic mode
        #[arg(long, default_value_t = 1000)]
        patience: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Combined CSV table of basis widths, Kolmogorov widths and sigma values
    Table {
        #[arg(long)]
        weights: String,
        #[arg(long)]
        orlicz: String,
        /// Include sigma rows for this l_p exponent
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        tail_bound: Option<f64>,
        #[arg(long)]
        n_range: Option<String>,
        #[arg(long)]
        m_range: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run every randomized verification suite; nonzero exit on any failure
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials for the inequality suites; heavier suites scale down from it
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Norm {
            orlicz,
            input,
            gamma,
            output,
        } => {
            let gauge = spec::parse_gauge(&orlicz)?;
            let x = spec::read_sequence(&input)?;
            let gamma = gamma.as_deref().map(spec::parse_index_set).transpose()?;
            let text = commands::norm_command(&gauge, &x, gamma.as_ref())?;
            emit(&text, output.as_ref())?;
            Ok(0)
        }
        Command::Charseq {
            weights,
            d,
            tail_bound,
            output,
        } => {
            let lambda = spec::parse_weights(&weights, d, tail_bound)?;
            let text = commands::charseq_command(&lambda)?;
            emit(&text, output.as_ref())?;
            Ok(0)
        }
        Command::Widths {
            weights,
            orlicz,
            target,
            d,
            tail_bound,
            m_range,
            n_range,
            level_range,
            gamma,
            output,
        } => {
            let lambda = spec::parse_weights(&weights, d, tail_bound)?;
            let source = spec::parse_gauge(&orlicz)?;
            let target = match target {
                Some(spec) => spec::parse_gauge(&spec)?,
                None => source.clone(),
            };
            let op = DiagonalOperator::new(lambda, source, target)?;
            let request = commands::WidthsRequest {
                gamma: gamma.as_deref().map(spec::parse_index_set).transpose()?,
                n_range: n_range.as_deref().map(spec::parse_range).transpose()?,
                level_range: level_range.as_deref().map(spec::parse_range).transpose()?,
                m_range: m_range.as_deref().map(spec::parse_range).transpose()?,
            };
            if request.is_empty() {
                return Err(CliError::Usage(
                    "widths needs at least one of --gamma, --n-range, --level-range, --m-range".into(),
                ));
            }
            let text = commands::widths_command(&op, &request)?;
            emit(&text, output.as_ref())?;
            Ok(0)
        }
        Command::Sigma {
            weights,
            orlicz,
            p,
            n,
            n_range,
            d,
            tail_bound,
            s_cap,
            heuristic,
            patience,
            output,
        } => {
            let lambda = spec::parse_weights(&weights, d, tail_bound)?;
            let gauge = spec::parse_gauge(&orlicz)?;
            let orders: Vec<usize> = match (n, n_range) {
                (Some(n), None) => vec![n],
                (None, Some(range)) => spec::parse_range(&range)?.collect(),
                (None, None) => return Err(CliError::Usage("sigma needs --n or --n-range".into())),
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage("give either --n or --n-range, not both".into()))
                }
            };
            let policy = SearchPolicy {
                s_cap,
                patience,
                mode: if heuristic { SearchMode::Heuristic } else { SearchMode::Certified },
            };
            let request = commands::SigmaRequest { p, orders, policy };
            let text = commands::sigma_command(&gauge, &lambda, &request)?;
            emit(&text, output.as_ref())?;
            Ok(0)
        }
        Command::Table {
            weights,
            orlicz,
            p,
            d,
            tail_bound,
            n_range,
            m_range,
            output,
        } => {
            let lambda = spec::parse_weights(&weights, d, tail_bound)?;
            let gauge = spec::parse_gauge(&orlicz)?;
            let op = DiagonalOperator::new(lambda, gauge.clone(), gauge)?;
            let request = commands::TableRequest {
                p,
                n_range: n_range.as_deref().map(spec::parse_range).transpose()?,
                m_range: m_range.as_deref().map(spec::parse_range).transpose()?,
            };
            if request.n_range.is_none() && request.m_range.is_none() {
                return Err(CliError::Usage("table needs --n-range and/or --m-range".into()));
            }
            let text = commands::table_command(&op, &request)?;
            emit(&text, output.as_ref())?;
            Ok(0)
        }
        Command::Verify {
            seed,
            trials,
            output,
        } => {
            let (text, passed) = commands::verify_command(seed, trials)?;
            emit(&text, output.as_ref())?;
            Ok(if passed { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            err.report();
            ExitCode::from(err.exit_code())
        }
    }
}
