//! `sldkit`: SLDs, QFI values and Fisher tensors from JSON inputs.
//!
//! Exit status is 0 on success, 1 on usage or input errors and 2 on numerical
//! failures (inconsistent systems, degenerate inputs). Failures print a single
//! line starting with `error:` to stderr.

mod commands;
mod error;
mod family;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Format, Options};
use error::CliError;
use family::FamilySpec;
use solve::Method;

#[derive(Parser)]
#[command(name = "sldkit", version, about = "Symmetric logarithmic derivatives and quantum Fisher information")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON input file.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Numerical tolerance.
    #[arg(long, global = true, env = "SLDKIT_TOL", default_value_t = 1e-10)]
    tol: f64,
    /// Finite-difference step for sampled families.
    #[arg(long, global = true, default_value_t = 1e-5)]
    fd_step: f64,
    #[arg(long, global = true, value_enum, default_value_t = Method::General)]
    method: Method,
    /// Compare against the eigenbasis oracle.
    #[arg(long, global = true)]
    check_oracle: bool,
    /// Accept repeated or vanishing weights where a chart collapses.
    #[arg(long, global = true)]
    allow_degenerate: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generator basis and structure constants.
    Basis {
        #[arg(long)]
        n: usize,
    },
    /// SLD of a family at one angle.
    Sld {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
    },
    /// QFI over a list or range of angles.
    Qfi {
        /// Comma-separated angles.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "range")]
        thetas: Option<Vec<f64>>,
        /// `start:stop:count`.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
    },
    /// Qutrit Fisher tensor over the flag chart.
    Tensor {
        /// Comma-separated weights `k₁,k₂,k₃`.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let c = &cli.common;
    if !(c.tol > 0.0) || !(c.fd_step > 0.0) {
        return Err(CliError::Usage("--tol and --fd-step must be positive".into()));
    }
    if c.format == Format::Csv && !matches!(cli.command, Command::Qfi { .. }) {
        return Err(CliError::Usage("csv output is only available for qfi".into()));
    }
    let opts = Options {
        tol: c.tol,
        fd_step: c.fd_step,
        method: c.method,
        check_oracle: c.check_oracle,
        allow_degenerate: c.allow_degenerate,
    };
    let input = c.input.as_deref();
    let text = match cli.command {
        Command::Basis { n } => commands::basis(n)?,
        Command::Sld { theta } => {
            let spec: FamilySpec = commands::read_json(input)?;
            commands::to_json(&commands::sld(&spec, theta, &opts)?)?
        }
        Command::Qfi { thetas, range } => {
            let spec: FamilySpec = commands::read_json(input)?;
            let thetas = match (thetas, range) {
                (Some(t), _) => t,
                (None, Some(r)) => commands::parse_range(&r)?,
                (None, None) => vec![0.0],
            };
            let report = commands::qfi(&spec, &thetas, &opts)?;
            match c.format {
                Format::Json => commands::to_json(&report)?,
                Format::Csv => commands::qfi_csv(&report),
            }
        }
        Command::Tensor { weights } => {
            let weights = commands::tensor_weights(weights, input)?;
            commands::to_json(&commands::tensor(&weights, &opts)?)?
        }
    };
    match &c.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("{}", CliError::Usage(first.to_string()).diagnostic());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
