use clap::{Args, ValueEnum};
use serde::Serialize;

use super::parse_point;
use crate::Failure;
use stealth_place::analytic2x2::{
    classify_case, lemma1_check, theorem1_config, theorem2_config, verify_theorem1,
    Theorem1Diagnostics, DEFAULT_CASE_TOL, SYMMETRIC_PHASE,
};
use stealth_place::fim::det_fim;
use stealth_place::geometry::{Point, QuadAngles, Scenario};
use stealth_place::jsonfmt;
use stealth_place::svgplot::render_config_svg;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Free placement: diametral pair on a circle through both targets.
    Thm1,
    /// Both sensors between the targets: parallelogram configuration.
    Thm2,
}

#[derive(Args)]
pub struct OptimalArgs {
    #[arg(long, value_enum)]
    mode: Mode,

    /// First target as "x,y".
    #[arg(long, value_parser = parse_point, default_value = "0,0")]
    t1: Point,

    /// Second target as "x,y".
    #[arg(long, value_parser = parse_point, default_value = "1,0")]
    t2: Point,

    #[arg(long)]
    gamma: f64,

    /// Circle diameter for thm1 mode; defaults to the smallest admissible,
    /// d / gamma.
    #[arg(long)]
    diameter: Option<f64>,

    /// Angular position of the first sensor on the thm1 circle (radians).
    #[arg(long)]
    phase: Option<f64>,

    /// Write a configuration diagram to this SVG path.
    #[arg(long)]
    plot: Option<std::path::PathBuf>,
}

#[derive(Serialize)]
struct OptimalOutput {
    scenario: Scenario,
    objective: f64,
    leakage: f64,
    quad: QuadAngles,
    cases: Vec<String>,
    lemma1_slack: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<Theorem1Diagnostics>,
}

pub fn run(args: OptimalArgs) -> Result<(), Failure> {
    let scenario = match args.mode {
        Mode::Thm1 => {
            let d = args.t1.dist(args.t2);
            if !(args.gamma > 0.0 && args.gamma <= 1.0) {
                return Err(Failure::usage(format!(
                    "gamma must be in (0, 1], got {}",
                    args.gamma
                )));
            }
            let diameter = args.diameter.unwrap_or(d / args.gamma);
            let phase = args.phase.unwrap_or(SYMMETRIC_PHASE);
            theorem1_config(args.t1, args.t2, args.gamma, diameter, phase)?
        }
        Mode::Thm2 => theorem2_config(args.t1, args.t2, args.gamma)?,
    };
    let rep = det_fim(&scenario)?;
    let quad = QuadAngles::from_scenario(&scenario)?;
    let label = classify_case(&quad, DEFAULT_CASE_TOL);
    let diagnostics = match args.mode {
        Mode::Thm1 => Some(verify_theorem1(&scenario, args.gamma)?),
        Mode::Thm2 => None,
    };
    if let Some(path) = &args.plot {
        let svg = render_config_svg(&scenario, args.gamma)?;
        std::fs::write(path, svg)
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
    }
    let out = OptimalOutput {
        scenario,
        objective: rep.objective,
        leakage: rep.leakage,
        quad,
        cases: label.labels.iter().map(|c| c.to_string()).collect(),
        lemma1_slack: lemma1_check(&quad).slack,
        diagnostics,
    };
    println!("{}", jsonfmt::to_json_17(&out));
    Ok(())
}
