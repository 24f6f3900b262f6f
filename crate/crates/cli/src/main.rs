//! `potkit`: verification suites and numerical runs from the command line.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod io;
mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use potkit::Complex64;

use crate::io::{exit, parse_complex, CliError};
use crate::verify::Suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "potkit",
    version,
    about = "Two-dimensional potential theory: identities, capacities, vortices, kernels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the built-in identities and print a residual table.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Also write the table to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Multiply every tolerance by this factor.
        #[arg(long, default_value_t = 1.0, hide = true)]
        tolerance_scale: f64,
    },
    /// Fekete points and the capacity report of a compact set.
    Fekete {
        /// Compact set as inline JSON or a file path, e.g. {"kind":"circle","R":1.0}.
        #[arg(long)]
        domain: String,
        /// Largest ladder size.
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(8..=256))]
        n_max: u64,
        /// Optimize a single configuration of this size instead of the ladder.
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=256))]
        n: Option<u64>,
        /// Finite pole `re,im` replacing infinity.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        pole: Option<Complex64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Directory receiving points.csv and report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate a point-vortex system.
    Vortex {
        /// Vortex system as inline JSON or a file path.
        #[arg(long)]
        domain: String,
        #[arg(long)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Directory receiving trajectory.csv and summary.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lattice constants, Green data and period matrices of a flat torus;
    /// strip-double kernels when tau is purely imaginary.
    Torus {
        /// Modulus `re,im`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        tau: Option<Complex64>,
        /// {"tau":[re,im]} or {"tau":[0,t],"p":p}, inline or a file path.
        #[arg(long, conflicts_with = "tau")]
        domain: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Robin data h0, h1 and curvature of a planar domain.
    Green {
        /// Domain as inline JSON or a file path, e.g. {"kind":"disk","R":1.0}.
        #[arg(long)]
        domain: String,
        /// Evaluation point `x,y`; repeatable.
        #[arg(long = "at", required = true, value_parser = parse_complex, allow_hyphen_values = true)]
        at: Vec<Complex64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    match cli.command {
        Command::Verify { suite, format, out, tolerance_scale } => {
            if !(tolerance_scale >= 0.0) {
                return Err(CliError::usage("--tolerance-scale must be non-negative"));
            }
            commands::verify(suite, tolerance_scale, format, out.as_deref())
        }
        Command::Fekete { domain, n_max, n, pole, format, out } => {
            commands::fekete(&domain, n.map(|n| n as usize), n_max as usize, pole, format, out.as_deref())
        }
        Command::Vortex { domain, t_end, tol, format, out } => {
            if !(t_end.is_finite() && t_end >= 0.0) {
                return Err(CliError::usage("--t-end must be finite and non-negative"));
            }
            if !(tol > 0.0 && tol < 1.0) {
                return Err(CliError::usage("--tol must lie in (0, 1)"));
            }
            commands::vortex(&domain, t_end, tol, format, out.as_deref())
        }
        Command::Torus { tau, domain, format, out } => commands::torus(tau, domain.as_deref(), format, out.as_deref()),
        Command::Green { domain, at, format, out } => commands::green(&domain, &at, format, out.as_deref()),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::OK,
                _ => exit::USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stdout.flush();
            out.code
        }
        Err(e) => {
            eprintln!("potkit: {}", e.message);
            e.code
        }
    };
    std::process::exit(code);
}
