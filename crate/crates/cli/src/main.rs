//! Command-line runner for the submersion identity verification engine.
//!
//! Exit codes: 0 when every selected check passes, 1 when any check
//! fails its tolerance, 2 for configuration errors (unknown example or
//! check, unmet preconditions).

use clap::{Parser, Subcommand, ValueEnum};
use std::process::ExitCode;
use subcheck_core::report::{self, Format, RunConfig};

#[derive(Parser)]
#[command(
    name = "subcheck",
    about = "Pointwise verification of curvature, O'Neill tensor and codifferential identities on a catalog of closed-form manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks on a catalog example and report residuals.
    Verify {
        /// Catalog example name (see `list`).
        #[arg(long)]
        example: String,
        /// Comma-separated check names, or `all` for the example's
        /// applicable defaults.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Number of seeded sample points.
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// PRNG seed for the sample points.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Tolerance override applied to every selected check; when
        /// omitted each check uses its pinned default.
        #[arg(long)]
        tol: Option<f64>,
        /// Output format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Write the report to a file instead of standard output.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Enumerate catalog examples and check names.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            println!("examples:");
            for name in subcheck_core::catalog::example_names() {
                let checks = report::default_checks(name).expect("catalog name");
                println!("  {name}  ({} default checks)", checks.len());
            }
            println!("checks:");
            for name in report::check_names() {
                println!("  {name}");
            }
            ExitCode::SUCCESS
        }
        Command::Verify {
            example,
            checks,
            points,
            seed,
            tol,
            format,
            out,
        } => {
            let format = match format {
                OutputFormat::Text => Format::Text,
                OutputFormat::Json => Format::Json,
            };
            let config = RunConfig {
                example,
                checks: checks.split(',').map(|s| s.trim().to_string()).collect(),
                points,
                seed,
                tol,
                format,
            };
            let report = match report::run(&config) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let rendered = report::emit(&report, format);
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{rendered}"),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
