use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cosolve::commands::DEFAULT_MAX_INDEX;
use cosolve::config::{DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE};
use cosolve::{CommandError, Overrides, ProblemConfig, RunReport, EXIT_INPUT_ERROR};

/// Condition checker and alternating solver for pairs of nonlinear matrix
/// equations X = Q ± Σ Aᵢ* F(X) Aᵢ.
///
/// Exit codes: 0 pass, 1 input error, 2 condition or inequality violation,
/// 3 non-convergence.
#[derive(Debug, Parser)]
#[command(name = "cosolve", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run the condition checkers and inequality certificates.
    Verify(ProblemArgs),
    /// Run the checkers, then solve for a common solution.
    Solve(ProblemArgs),
    /// Check the exact sup-norm example exhaustively.
    ExampleLinf(LinfArgs),
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// JSON problem config.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Overrides the config's tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Overrides the config's iteration cap.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Report path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LinfArgs {
    /// Largest basis index in the truncated domain.
    #[arg(long, default_value_t = DEFAULT_MAX_INDEX)]
    max_index: u32,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    max_iter: usize,
    /// Use φ₁(t) = t/8 instead of t/160; the certificate should then fail.
    #[arg(long)]
    inject_phi1_fault: bool,
    /// Report path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_INPUT_ERROR
            } else {
                0
            };
            let _ = err.print();
            return exit(code);
        }
    };

    let (result, out) = match cli.command {
        Cmd::Verify(args) => (run_problem(&args, cosolve::verify), args.out),
        Cmd::Solve(args) => (run_problem(&args, cosolve::solve), args.out),
        Cmd::ExampleLinf(args) => (
            cosolve::example_linf(
                args.max_index,
                args.tol,
                args.max_iter,
                args.inject_phi1_fault,
            ),
            args.out,
        ),
    };
    let report = match result {
        Ok(report) => report,
        Err(err) => {
            eprintln!("error: {err}");
            return exit(EXIT_INPUT_ERROR);
        }
    };

    let json = report.to_json();
    match &out {
        Some(path) => {
            if let Err(err) = std::fs::write(path, json + "\n") {
                eprintln!("error: {}: {err}", path.display());
                return exit(EXIT_INPUT_ERROR);
            }
        }
        None => println!("{json}"),
    }
    summarize(&report);
    exit(report.exit_code)
}

fn run_problem(
    args: &ProblemArgs,
    command: fn(ProblemConfig, &Overrides) -> Result<RunReport, CommandError>,
) -> Result<RunReport, CommandError> {
    let config = ProblemConfig::load(&args.config)?;
    let overrides = Overrides {
        seed: args.seed,
        samples: args.samples,
        tolerance: args.tol,
        max_iterations: args.max_iter,
    };
    command(config, &overrides)
}

fn summarize(report: &RunReport) {
    eprintln!("status: {:?} (exit {})", report.status, report.exit_code);
    for finding in &report.findings {
        eprintln!("  - {finding}");
    }
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}
