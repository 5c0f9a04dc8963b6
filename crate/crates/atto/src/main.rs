//! Thin command-line front end: argument parsing, payload I/O, and exit
//! codes. All real work happens in the library.

use atto::cli::{run, CliOptions, CommandKind};
use atto::json::ErrorJson;
use clap::{Parser, Subcommand};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "atto",
    version,
    about = "Asymmetric truncated Toeplitz operators between finite-dimensional model spaces",
    long_about = "JSON-in/JSON-out commands for Clark systems, operator matrices, membership \
                  checks, matrix completion, dimension counts, Gram matrices, and a seeded \
                  property-verification suite.\n\nPayloads are read from the given file or from \
                  standard input. Exit codes: 0 success (and member/verified), 1 failed \
                  check/verification, 2 malformed payload, 3 numerical failure."
)]
struct Cli {
    /// Relative residual threshold for membership verdicts.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_membership: f64,

    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_rank: f64,

    /// Boundary grid size for oracle computations (power of two).
    #[arg(long, global = true, default_value_t = 4096)]
    grid: usize,

    /// Seed for every randomized computation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format (only `json`).
    #[arg(long, global = true, default_value = "json")]
    format: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clark system of a Blaschke product for a unimodular parameter.
    Clark { input: Option<PathBuf> },
    /// Operator matrix from a symbol pair or a boundary combination.
    Matrix { input: Option<PathBuf> },
    /// Membership test for a tagged matrix; exit 0 iff it represents an operator.
    Check { input: Option<PathBuf> },
    /// Reconstruct a full matrix from its determining entries.
    Complete { input: Option<PathBuf> },
    /// Numerical dimension of the operator space plus its two symbol-type spans.
    Dim { input: Option<PathBuf> },
    /// Seeded property-verification suite; exit 0 iff every check passes.
    Verify { input: Option<PathBuf> },
    /// Gram matrix of a basis with its condition number.
    Gram { input: Option<PathBuf> },
}

fn read_payload(path: &Option<PathBuf>) -> std::io::Result<String> {
    match path {
        Some(p) => std::fs::read_to_string(p),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, input) = match &cli.command {
        Command::Clark { input } => (CommandKind::Clark, input),
        Command::Matrix { input } => (CommandKind::Matrix, input),
        Command::Check { input } => (CommandKind::Check, input),
        Command::Complete { input } => (CommandKind::Complete, input),
        Command::Dim { input } => (CommandKind::Dim, input),
        Command::Verify { input } => (CommandKind::Verify, input),
        Command::Gram { input } => (CommandKind::Gram, input),
    };

    if cli.format != "json" {
        let err = atto::Error::InvalidInput(format!(
            "unsupported output format `{}` (only `json`)",
            cli.format
        ));
        eprintln!("{}", serde_json::to_string(&ErrorJson::from_error(&err)).unwrap());
        return ExitCode::from(2);
    }

    let payload = match read_payload(input) {
        Ok(p) => p,
        Err(e) => {
            let err = atto::Error::InvalidInput(format!("cannot read payload: {e}"));
            eprintln!("{}", serde_json::to_string(&ErrorJson::from_error(&err)).unwrap());
            return ExitCode::from(2);
        }
    };

    let opts = CliOptions {
        tol_membership: cli.tol_membership,
        tol_rank: cli.tol_rank,
        grid: cli.grid,
        seed: cli.seed,
    };

    match run(kind, &payload, &opts) {
        Ok((output, code)) => {
            print!("{output}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&ErrorJson::from_error(&e)).unwrap());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
