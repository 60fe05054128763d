mod cache;
mod commands;
mod config;
mod error;
mod output;
mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qrenorm_core::maass::Generator;

use commands::{MaassArgs, MaassCheck, Oracle, QuantumArgs, QuantumTarget, Waveform, WeightArg};
use config::{OutputFormat, Overrides, RunConfig};
use error::{CliError, EXIT_FAIL};
use suites::Suite;

/// Exact q-series expansion, renormalization and identity checks, with numeric Maass and quantum checks.
#[derive(Parser, Debug)]
#[command(name = "qrenorm", version)]
struct Cli {
    /// Truncation bound: series are computed to O(q^N).
    #[arg(long, global = true)]
    bound: Option<i64>,
    /// Working precision in decimal digits.
    #[arg(long, global = true)]
    precision: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Flat key = value configuration file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for cached coefficient tables.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Worker threads for verification suites.
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a catalogued series.
    Expand {
        /// Series id, e.g. SIGMA, SIGMA_STAR, W, SW, F1, GHOST_W.
        series: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Print one coefficient from an arithmetic oracle.
    Coeff {
        #[arg(value_enum)]
        oracle: Oracle,
        #[arg(allow_negative_numbers = true)]
        n: i64,
        /// Weight for the ideal oracle.
        #[arg(long, value_enum, default_value = "one")]
        weight: WeightArg,
    },
    /// Numeric checks on a Maass waveform at one point.
    Maass {
        #[arg(value_enum)]
        check: MaassCheck,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long)]
        y: f64,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        /// Number of Fourier terms; chosen from the tail bound when omitted.
        #[arg(long)]
        n_max: Option<i64>,
        #[arg(long, value_enum, default_value = "w")]
        waveform: Waveform,
        /// Accuracy target for the certified tail.
        #[arg(long, default_value_t = 1e-10)]
        target: f64,
    },
    /// Values at roots of unity.
    Quantum {
        #[arg(value_enum)]
        target: QuantumTarget,
        /// Rational point p/q.
        #[arg(long, allow_negative_numbers = true)]
        x: Option<String>,
        /// Generator for period functions.
        #[arg(long, default_value = "B")]
        gamma: Generator,
        /// Comma-separated rational points for period samples.
        #[arg(long, allow_negative_numbers = true)]
        xs: Option<String>,
    },
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    let base = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let overrides = Overrides {
        precision: cli.precision,
        format: cli.format,
        cache: cli.cache.clone(),
        parallelism: cli.parallelism,
    };
    let cfg = base.apply(&overrides)?;
    let bound = cli.bound.unwrap_or(cfg.default_bound);
    match cli.command {
        Command::Expand { series } => commands::expand(&series, bound, &cfg),
        Command::Verify { suite } => commands::verify(suite, bound, &cfg),
        Command::Coeff { oracle, n, weight } => commands::coeff(oracle, n, weight, &cfg),
        Command::Maass { check, x, y, h, n_max, waveform, target } => {
            commands::maass(&MaassArgs { check, x, y, h, n_max, waveform, target }, &cfg)
        }
        Command::Quantum { target, x, gamma, xs } => commands::quantum(&QuantumArgs { target, x, gamma, xs }, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_FAIL as u8);
            }
            if out.code != 0 {
                eprintln!("qrenorm: check failed");
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
