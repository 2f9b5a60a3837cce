//! `kairos` — batch pipeline over the intrinsic-time analytics.
//!
//! Five subcommands: `synth` writes a seeded Brownian tick series,
//! `dissect` exports the directional-change event log, `scaling` fits the
//! four scaling laws, `invariants` evaluates the physical/intrinsic
//! invariant profile and the lambda factor, and `check` evaluates the
//! bridge identity at a single `(dt, delta)` pair.
//!
//! Every long option can also be supplied by a `key = value` config file
//! (`--config`); explicit flags win. `KAIROS_OUT` sets the default output
//! directory. Thresholds are entered in percent on the command line and
//! stored as dimensionless fractions in all output files. All randomness
//! flows from the single `--seed`.
//!
//! Exit codes: 0 on success, 2 for usage errors, 1 for runtime failures.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "kairos", version, about = "Physical-time vs intrinsic-time tick analytics")]
struct Cli {
    /// Config file with `key = value` lines mirroring the long options.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded Brownian tick series (ticks.csv + ticks.meta.json).
    Synth(SynthArgs),
    /// Export the directional-change event log at one threshold.
    Dissect(DissectArgs),
    /// Fit the four scaling laws over log-spaced grids.
    Scaling(ScalingArgs),
    /// Evaluate the invariant profile and the lambda correction factor.
    Invariants(InvariantsArgs),
    /// Evaluate the bridge identity at one (dt, delta) pair.
    Check(CheckArgs),
}

#[derive(Args, Debug, Default, Clone)]
struct OutArgs {
    /// Output directory (default: $KAIROS_OUT, else the working directory).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SynthArgs {
    /// Volatility per sqrt-second.
    #[arg(long)]
    sigma: Option<f64>,
    /// Number of ticks (at least 2).
    #[arg(long)]
    n: Option<usize>,
    /// Tick spacing in seconds.
    #[arg(long)]
    dt: Option<f64>,
    /// Initial price.
    #[arg(long)]
    p0: Option<f64>,
    /// RNG seed; a fixed seed means bit-identical output.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutArgs,
}

/// Where the series to analyze comes from: a tick CSV or an inline
/// synthetic path (exactly one).
#[derive(Args, Debug, Clone)]
struct SourceArgs {
    /// Tick CSV to analyze.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Synthesize instead of reading: volatility per sqrt-second.
    #[arg(long, conflicts_with = "input")]
    sigma: Option<f64>,
    /// Synthetic series: number of ticks.
    #[arg(long, conflicts_with = "input")]
    n: Option<usize>,
    /// Synthetic series: tick spacing in seconds.
    #[arg(long, conflicts_with = "input")]
    tick_dt: Option<f64>,
    /// Synthetic series: initial price.
    #[arg(long, conflicts_with = "input")]
    p0: Option<f64>,
    /// Synthetic series: RNG seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Time column, by name or 0-based index.
    #[arg(long, value_name = "COL")]
    time_col: Option<String>,
    /// Price column (trade mode), by name or 0-based index.
    #[arg(long, value_name = "COL")]
    price_col: Option<String>,
    /// Bid column (mid mode).
    #[arg(long, value_name = "COL")]
    bid_col: Option<String>,
    /// Ask column (mid mode).
    #[arg(long, value_name = "COL")]
    ask_col: Option<String>,
    /// The CSV has no header row; columns must be addressed by index.
    #[arg(long)]
    no_header: bool,
    /// Timestamp encoding: epoch | iso8601.
    #[arg(long, value_name = "FMT")]
    time_format: Option<String>,
    /// Price source: trade | mid.
    #[arg(long, value_name = "MODE")]
    price_mode: Option<String>,
    /// Label recorded in outputs.
    #[arg(long)]
    label: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    /// Smallest sampling interval, seconds.
    #[arg(long)]
    dt_lo: Option<f64>,
    /// Largest sampling interval, seconds.
    #[arg(long)]
    dt_hi: Option<f64>,
    /// Number of sampling intervals.
    #[arg(long)]
    dt_points: Option<usize>,
    /// Smallest threshold, in percent.
    #[arg(long)]
    delta_lo: Option<f64>,
    /// Largest threshold, in percent.
    #[arg(long)]
    delta_hi: Option<f64>,
    /// Number of thresholds.
    #[arg(long)]
    delta_points: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct DissectArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Directional-change threshold, in percent.
    #[arg(long)]
    delta: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug, Clone)]
struct ScalingArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    grids: GridArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug, Clone)]
struct InvariantsArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    grids: GridArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug, Clone)]
struct CheckArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Sampling interval in seconds.
    #[arg(long)]
    dt: Option<f64>,
    /// Directional-change threshold, in percent.
    #[arg(long)]
    delta: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

/// Exit with clap's usage-error code (2).
pub(crate) fn usage_error(message: String) -> ! {
    Cli::command().error(clap::error::ErrorKind::MissingRequiredArgument, message).exit()
}

/// Exit with clap's usage-error code when a required value is missing
/// from both the command line and the config file.
pub(crate) fn missing_value(flag: &str) -> ! {
    usage_error(format!("--{flag} must be given on the command line or in the config file"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file = match config::load_config_file(cli.config.as_deref()) {
        Ok(map) => map,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::FAILURE;
        }
    };
    let result = match cli.command {
        Command::Synth(args) => commands::synth(args, &file),
        Command::Dissect(args) => commands::dissect(args, &file),
        Command::Scaling(args) => commands::scaling(args, &file),
        Command::Invariants(args) => commands::invariants(args, &file),
        Command::Check(args) => commands::check(args, &file),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
