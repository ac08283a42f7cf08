use clap::Args;

use super::load_scenario;
use crate::Failure;
use stealth_place::analytic2x2::verify_theorem1;
use stealth_place::jsonfmt;

#[derive(Args)]
pub struct VerifyArgs {
    /// Scenario JSON file with two targets and two sensors.
    #[arg(long)]
    scenario: std::path::PathBuf,

    #[arg(long)]
    gamma: f64,
}

pub fn run(args: VerifyArgs) -> Result<(), Failure> {
    let scenario = load_scenario(&args.scenario)?;
    let diag = verify_theorem1(&scenario, args.gamma)?;
    println!("{}", jsonfmt::to_json_17(&diag));
    if diag.passed() {
        Ok(())
    } else {
        Err(Failure::verification(
            "scenario fails the free-placement optimality conditions".to_string(),
        ))
    }
}
