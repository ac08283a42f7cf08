use clap::Args;
use serde::Serialize;

use super::load_scenario;
use crate::Failure;
use stealth_place::fim::{det_fim, empirical_fim_det, FimReport};
use stealth_place::jsonfmt;

/// The pair-sum and assembled-matrix routes must agree to this relative
/// precision on any valid scenario.
const IDENTITY_TOL: f64 = 1e-9;

#[derive(Args)]
pub struct FimcheckArgs {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: std::path::PathBuf,
}

#[derive(Serialize)]
struct FimcheckOutput {
    report: FimReport,
    empirical_dets: Vec<f64>,
    max_rel_error: f64,
    tolerance: f64,
    passed: bool,
}

pub fn run(args: FimcheckArgs) -> Result<(), Failure> {
    let scenario = load_scenario(&args.scenario)?;
    let report = det_fim(&scenario)?;
    let mut empirical_dets = Vec::with_capacity(scenario.num_targets());
    let mut max_rel_error = 0.0f64;
    for k in 0..scenario.num_targets() {
        let det = empirical_fim_det(&scenario, k)?;
        let rel = (det - report.target_info[k]).abs()
            / report.target_info[k].abs().max(1e-12);
        max_rel_error = max_rel_error.max(rel);
        empirical_dets.push(det);
    }
    let passed = max_rel_error < IDENTITY_TOL;
    let out = FimcheckOutput {
        report,
        empirical_dets,
        max_rel_error,
        tolerance: IDENTITY_TOL,
        passed,
    };
    println!("{}", jsonfmt::to_json_17(&out));
    if passed {
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "determinant identity violated: max relative error {max_rel_error:e}"
        )))
    }
}
