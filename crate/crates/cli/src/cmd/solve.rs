use clap::Args;
use serde::Serialize;

use crate::Failure;
use stealth_place::jsonfmt;
use stealth_place::solver::{certify, solve, CertifyReport, Method, SolveOptions, SolveResult};

#[derive(Args)]
pub struct SolveArgs {
    #[arg(long)]
    m: usize,

    #[arg(long)]
    gamma: f64,

    /// Random starts (analytic warm starts come extra unless disabled).
    #[arg(long, default_value_t = 16)]
    starts: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = 5000)]
    max_iters: usize,

    /// penalty-gradient or augmented-lagrangian.
    #[arg(long, default_value = "penalty-gradient")]
    method: String,

    /// Drop the analytic warm starts (pure random multi-start).
    #[arg(long = "no-warm-starts")]
    no_warm_starts: bool,

    /// Include per-start improvement trajectories in the JSON dump.
    #[arg(long)]
    trace: bool,
}

#[derive(Serialize)]
struct SolveOutput {
    m: usize,
    gamma: f64,
    options: SolveOptions,
    result: SolveResult,
    certification: CertifyReport,
}

pub fn run(args: SolveArgs) -> Result<(), Failure> {
    let method: Method = args.method.parse().map_err(Failure::usage)?;
    let options = SolveOptions {
        starts: args.starts,
        max_iters: args.max_iters,
        seed: args.seed,
        warm_starts: !args.no_warm_starts,
        method,
        trace: args.trace,
        ..Default::default()
    };
    let result = solve(args.m, args.gamma, &options)?;
    let certification = certify(&result)?;
    let out = SolveOutput { m: args.m, gamma: args.gamma, options, result, certification };
    println!("{}", jsonfmt::to_json_17(&out));
    Ok(())
}
