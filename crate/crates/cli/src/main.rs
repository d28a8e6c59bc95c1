//! Experiment runner for the fractional LMS family: named replication
//! presets, custom scenario files and gradient cross-checks, with CSV/JSON
//! emission of learning curves and steady-state tables.

mod config;
mod gradcheck;
mod output;
mod replicate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fraclms::FractionalOrder;

/// Exit code for usage or configuration errors.
const EXIT_USAGE: u8 = 1;
/// Exit code when a replication or tolerance check fails.
const EXIT_TOLERANCE: u8 = 2;

#[derive(Parser)]
#[command(name = "fraclms", version, about = "Fractional LMS experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named preset (or all of them) and compare the results against
    /// the embedded reference targets.
    Replicate {
        /// Preset name: fnlms-negative, fnlms-positive, fclms-negative or all.
        preset: String,
        /// Monte Carlo rounds per configuration.
        #[arg(long, default_value_t = fraclms::sim::DEFAULT_RUNS)]
        runs: usize,
        /// Samples per run.
        #[arg(long, default_value_t = fraclms::sim::DEFAULT_SAMPLES)]
        samples: usize,
        /// Master seed of the run substreams.
        #[arg(long, default_value_t = fraclms::sim::DEFAULT_MASTER_SEED)]
        seed: u64,
        /// Comma-separated fractional orders, e.g. 0.4,0.5,1.0.
        #[arg(long, value_delimiter = ',')]
        nu: Option<Vec<f64>>,
        /// Output directory for curve and table files.
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Steady-state table format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Both)]
        format: OutputFormat,
    },
    /// Run a custom scenario described by a key-value config file.
    Run {
        /// Path to the scenario file.
        config: PathBuf,
        /// Override the Monte Carlo rounds of the file.
        #[arg(long)]
        runs: Option<usize>,
        /// Override the samples per run of the file.
        #[arg(long)]
        samples: Option<usize>,
        /// Override the master seed of the file.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for curve and table files.
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Steady-state table format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Both)]
        format: OutputFormat,
    },
    /// Cross-check the fractional gradients against their oracles.
    Gradcheck {
        /// Random instances for the quadratic-fit suite.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Restrict the quadratic-fit suite to a single fractional order.
        #[arg(long)]
        nu: Option<f64>,
        /// Seed of the random instances.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn parse_nu_list(values: &[f64]) -> anyhow::Result<Vec<FractionalOrder>> {
    values
        .iter()
        .map(|&v| FractionalOrder::new(v).map_err(Into::into))
        .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };

    let outcome = match cli.command {
        Command::Replicate {
            preset,
            runs,
            samples,
            seed,
            nu,
            out,
            format,
        } => {
            let nu_list = match nu {
                Some(values) => match parse_nu_list(&values) {
                    Ok(list) => list,
                    Err(err) => {
                        eprintln!("error: {err}");
                        return ExitCode::from(EXIT_USAGE);
                    }
                },
                None => fraclms::sim::default_nu_list(),
            };
            replicate::replicate(&preset, runs, samples, seed, &nu_list, &out, format)
        }
        Command::Run {
            config,
            runs,
            samples,
            seed,
            out,
            format,
        } => replicate::run_custom(&config, runs, samples, seed, &out, format),
        Command::Gradcheck { trials, nu, seed } => gradcheck::gradcheck(trials, nu, seed),
    };

    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_TOLERANCE),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
