//! `modframe` — config-driven verification and transformation of integral
//! frames over matrix algebras.
//!
//! One job per invocation: `verify`, `canonize`, `image` and `stability`
//! read a JSON job config; `fixtures` runs the built-in reference checks.
//! Reports are emitted as canonical JSON (byte-stable for identical
//! configs) or as a CSV eigenvalue spectrum.

mod config;
mod emit;
mod fixtures;
mod jobs;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{JobConfig, JobKind};
use jobs::JobOutcome;

/// Errors carry the exit-code contract: 2 validation, 3 numerical, 4 I/O.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct JobArgs {
    /// Path to the JSON job config.
    #[arg(long)]
    config: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: full JSON or the Gram spectrum as CSV.
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the report/certification tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct FixturesArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: full JSON or the (empty) spectrum as CSV.
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the frame condition and optional candidate bounds.
    Verify(JobArgs),
    /// Compute the canonical Parseval and dual families.
    Canonize(JobArgs),
    /// Transport the frame through an adjointable map and predict bounds.
    Image(JobArgs),
    /// Perturbation analysis of a frame pair.
    Stability(JobArgs),
    /// Run the built-in reference fixtures end to end.
    Fixtures(FixturesArgs),
}

#[derive(Parser)]
#[command(
    name = "modframe",
    version,
    about = "Integral frames in Hilbert C*-modules over matrix algebras: quadrature frame operators, bound certificates, canonical duals, stability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn run_job(kind: JobKind, args: &JobArgs) -> Result<JobOutcome, CliError> {
    let mut config = JobConfig::load(&args.config)?;
    if config.job != kind {
        return Err(CliError::Validation(format!(
            "job: config requests '{}' but the {kind} subcommand was invoked",
            config.job
        )));
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(tol) = args.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Validation("--tol must be positive and finite".into()));
        }
        config.tolerances.report = tol;
        config.tolerances.certify = tol;
    }
    jobs::execute_job(&config)
}

fn emit_outcome(
    outcome: &JobOutcome,
    format: OutputFormat,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let text = match format {
        OutputFormat::Json => emit::canonical_json(&outcome.report),
        OutputFormat::Csv => emit::spectrum_csv(&outcome.spectrum),
    };
    emit::write_output(&text, out)
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let started = Instant::now();
    let (outcome, format, out) = match &cli.command {
        Command::Verify(args) => (run_job(JobKind::Verify, args)?, args.format, args.out.clone()),
        Command::Canonize(args) => (run_job(JobKind::Canonize, args)?, args.format, args.out.clone()),
        Command::Image(args) => (run_job(JobKind::Image, args)?, args.format, args.out.clone()),
        Command::Stability(args) => {
            (run_job(JobKind::Stability, args)?, args.format, args.out.clone())
        }
        Command::Fixtures(args) => (fixtures::run_fixtures()?, args.format, args.out.clone()),
    };
    emit_outcome(&outcome, format, out.as_deref())?;
    // Timing stays on stderr so the report bytes depend only on the config.
    eprintln!("modframe: job finished in {} ms", started.elapsed().as_millis());
    if let Some(reason) = &outcome.negative_verdict {
        Err(CliError::Numerical(reason.clone()))
    } else {
        Ok(())
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = dispatch(cli) {
        eprintln!("modframe: {}", err.message());
        std::process::exit(err.exit_code());
    }
}
