use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tubebound::geometry::Family;
use tubebound_cli::config::RhoRange;
use tubebound_cli::{emit, run, CliError, CommandKind, OutputFormat, PartialConfig};

/// First Dirichlet eigenvalue of model tubes in CP^n and degree-based upper bounds.
#[derive(Parser)]
#[command(name = "tubebound", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound for one tube radius.
    Bound(Flags),
    /// Bounds over a range of radii.
    Sweep(Flags),
    /// First eigenvalue and sampled eigenfunction of a model tube.
    Spectrum(Flags),
    /// Tube volume ratio from the degrees.
    Volume(Flags),
    /// Run the invariant and oracle suite.
    Verify(Flags),
}

#[derive(Args)]
struct Flags {
    /// JSON file with any of the run settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// cpq, quadric, segre, su5 or so10.
    #[arg(long, value_parser = parse_family)]
    model: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, requires_all = ["rho_stop", "rho_steps"])]
    rho_start: Option<f64>,
    #[arg(long, requires_all = ["rho_start", "rho_steps"])]
    rho_stop: Option<f64>,
    #[arg(long, requires_all = ["rho_start", "rho_stop"])]
    rho_steps: Option<usize>,
    /// Comma-separated degrees of the defining polynomials.
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<u32>>,
    /// Relative eigenvalue tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Relative tolerance of the moment quadratures.
    #[arg(long)]
    quad_tol: Option<f64>,
    /// Eigenfunction samples for `spectrum`.
    #[arg(long)]
    samples: Option<usize>,
    /// Seed for the randomized checks of `verify`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall time in the document.
    #[arg(long)]
    timing: bool,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::from_id(s).ok_or_else(|| format!("unknown model {s:?}; expected cpq, quadric, segre, su5 or so10"))
}

fn partial(command: CommandKind, f: Flags) -> (Option<PathBuf>, PartialConfig) {
    let rho_range = match (f.rho_start, f.rho_stop, f.rho_steps) {
        (Some(start), Some(stop), Some(steps)) => Some(RhoRange { start, stop, steps }),
        _ => None,
    };
    let p = PartialConfig {
        command: Some(command),
        model: f.model,
        n: f.n,
        q: f.q,
        lambda: f.lambda,
        rho: f.rho,
        rho_range,
        degrees: f.degrees,
        tol: f.tol,
        quad_tol: f.quad_tol,
        samples: f.samples,
        seed: f.seed,
        format: f.format,
        out: f.out,
        timing: f.timing.then_some(true),
    };
    (f.config, p)
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let (command, flags) = match cli.command {
        Command::Bound(f) => (CommandKind::Bound, f),
        Command::Sweep(f) => (CommandKind::Sweep, f),
        Command::Spectrum(f) => (CommandKind::Spectrum, f),
        Command::Volume(f) => (CommandKind::Volume, f),
        Command::Verify(f) => (CommandKind::Verify, f),
    };
    let (file, flags) = partial(command, flags);
    let base = match file {
        Some(path) => PartialConfig::from_file(&path)?,
        None => PartialConfig::default(),
    };
    let config = base.overlay(flags).finish()?;
    let outcome = run(&config)?;
    let bytes = emit(&outcome.document, config.format)?;
    match &config.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| CliError::io(path.display().to_string(), e))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("<stdout>", e))?;
        }
    }
    if outcome.exit_code == 4 {
        eprintln!("{}", CliError::Verify("one or more checks failed".into()).diagnostic());
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
