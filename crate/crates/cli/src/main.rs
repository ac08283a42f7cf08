//! `stealth-place`: bound sweeps, heading solves, two-sensor constructions
//! and verification, stealth-region rasters and figure emission.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error. With
//! `--json-errors` failures are reported as one JSON object on stderr.
//! `STEALTH_PLACE_THREADS` caps internal parallelism.

mod cmd;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "stealth-place", version, about)]
struct Cli {
    /// Report failures as structured JSON on stderr.
    #[arg(long, global = true)]
    json_errors: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic bound sweep over leakage levels, as CSV/JSON and SVG panels.
    Bounds(cmd::bounds::BoundsArgs),
    /// Multi-start local solve of the heading-angle placement problem.
    Solve(cmd::solve::SolveArgs),
    /// Construct a globally optimal two-sensor configuration.
    Optimal2x2(cmd::optimal::OptimalArgs),
    /// Check a two-sensor scenario against the free-placement optimality
    /// conditions.
    Verify(cmd::verify::VerifyArgs),
    /// Rasterize the stealth-feasible region for a target set.
    Region(cmd::region::RegionArgs),
    /// Cross-check the pair-sum criteria against assembled FIM determinants.
    Fimcheck(cmd::fimcheck::FimcheckArgs),
}

/// Failure carrying the exit code mandated by the error class.
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
    pub code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { kind: "usage", message: message.into(), code: 2 }
    }

    fn verification(message: impl Into<String>) -> Self {
        Failure { kind: "verification", message: message.into(), code: 1 }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure { kind: "io", message: message.into(), code: 2 }
    }
}

impl From<stealth_place::Error> for Failure {
    fn from(e: stealth_place::Error) -> Self {
        use stealth_place::Error::*;
        let kind = match &e {
            DegenerateGeometry(_) => "degenerate-geometry",
            InfeasibleParameters(_) => "infeasible-parameters",
            InvalidParameters(_) => "invalid-parameters",
            DomainError(_) => "domain-error",
            ResourceLimit(_) => "resource-limit",
            NoFeasiblePoint(_) => "no-feasible-point",
            BoundViolation(_) => "bound-violation",
        };
        // Bad arguments surface as usage errors; runtime contract
        // violations as failures.
        let code = match &e {
            InvalidParameters(_) | DomainError(_) | InfeasibleParameters(_) => 2,
            _ => 1,
        };
        Failure { kind, message: e.to_string(), code }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("STEALTH_PLACE_THREADS") {
        match v.parse::<usize>() {
            Ok(t) => stealth_place::set_max_threads(Some(t)),
            Err(_) => eprintln!("warning: ignoring non-numeric STEALTH_PLACE_THREADS={v}"),
        }
    }
    let result = match cli.command {
        Command::Bounds(args) => cmd::bounds::run(args),
        Command::Solve(args) => cmd::solve::run(args),
        Command::Optimal2x2(args) => cmd::optimal::run(args),
        Command::Verify(args) => cmd::verify::run(args),
        Command::Region(args) => cmd::region::run(args),
        Command::Fimcheck(args) => cmd::fimcheck::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if cli.json_errors {
                eprintln!(
                    "{}",
                    serde_json::json!({"error": {"kind": f.kind, "message": f.message}})
                );
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
