use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use teich_cli::{run_all, run_suite, CliError, OutputFormat, RunConfig, Suite, DEFAULT_SEED};
use teich_core::Exec;

#[derive(Parser)]
#[command(name = "teich")]
#[command(about = "Exact verification of theta identities, ansatz valuations and theta-pilot bounds")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; built-in defaults when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Report format; overrides `output_format` from the config
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for randomized property trials
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Run every check on the calling thread
    #[arg(long, global = true)]
    sequential: bool,

    /// Include wall time in the report (breaks byte-for-byte reproducibility)
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Theta inversion, quasi-periodicity and theta values
    VerifyTheta,
    /// The lower bound and its corollary for the configured prime
    Bound,
    /// Witness ansatz, Frobenius orbit and membership checks
    Ansatz,
    /// Log-link chains, m(eps) and p-adic logarithm trials
    Loglink,
    /// The bound across odd primes up to `ell_sweep_max`, plus the threshold
    SweepEll,
    /// Every suite in one report
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> OutputFormat {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Text => OutputFormat::Text,
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let start = Instant::now();
    let mut report = match cli.command {
        Command::VerifyTheta => run_suite(Suite::VerifyTheta, &cfg, cli.seed, exec)?,
        Command::Bound => run_suite(Suite::Bound, &cfg, cli.seed, exec)?,
        Command::Ansatz => run_suite(Suite::Ansatz, &cfg, cli.seed, exec)?,
        Command::Loglink => run_suite(Suite::Loglink, &cfg, cli.seed, exec)?,
        Command::SweepEll => run_suite(Suite::SweepEll, &cfg, cli.seed, exec)?,
        Command::All => run_all(&cfg, cli.seed, exec)?,
    };
    if cli.timing {
        report.wall_time_ms = Some(format!("{}/1", start.elapsed().as_millis()));
    }
    let format = cli.format.map(OutputFormat::from).unwrap_or(cfg.output_format);
    let text = report.render(format)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("teich: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
