use clap::{Args, ValueEnum};

use crate::Failure;
use stealth_place::bounds::{best_bounds, sweep_csv, BoundsReport};
use stealth_place::jsonfmt;
use stealth_place::svgplot::{render_bounds_svg, BoundsSweep};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Args)]
pub struct BoundsArgs {
    /// Comma-separated sensor counts, e.g. 3,6,9.
    #[arg(long = "m-list", value_delimiter = ',', required = true)]
    m_list: Vec<usize>,

    #[arg(long, default_value_t = 0.05)]
    gamma_min: f64,

    #[arg(long, default_value_t = 1.0)]
    gamma_max: f64,

    /// Number of leakage levels from gamma-min to gamma-max inclusive.
    #[arg(long, default_value_t = 40)]
    gamma_steps: usize,

    /// Emit eta^2 / m^2 in JSON output and on the plot y axis.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    normalize: bool,

    /// Table format written to stdout (the CSV schema always carries both
    /// raw and normalized columns).
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    out: TableFormat,

    /// Write the per-m panel figure to this SVG path.
    #[arg(long)]
    plot: Option<std::path::PathBuf>,
}

pub fn run(args: BoundsArgs) -> Result<(), Failure> {
    if args.m_list.is_empty() {
        return Err(Failure::usage("--m-list needs at least one sensor count"));
    }
    if !(args.gamma_min > 0.0 && args.gamma_max <= 1.0 && args.gamma_min <= args.gamma_max) {
        return Err(Failure::usage(format!(
            "gamma range ({}, {}) must satisfy 0 < min <= max <= 1",
            args.gamma_min, args.gamma_max
        )));
    }
    if args.gamma_steps < 1 {
        return Err(Failure::usage("--gamma-steps must be at least 1"));
    }
    let gammas: Vec<f64> = if args.gamma_steps == 1 {
        vec![args.gamma_max]
    } else {
        (0..args.gamma_steps)
            .map(|i| {
                args.gamma_min
                    + (args.gamma_max - args.gamma_min) * i as f64
                        / (args.gamma_steps - 1) as f64
            })
            .collect()
    };
    let mut reports: Vec<Vec<BoundsReport>> = Vec::new();
    for &m in &args.m_list {
        let mut row = Vec::with_capacity(gammas.len());
        for &g in &gammas {
            row.push(best_bounds(m, g)?);
        }
        reports.push(row);
    }

    match args.out {
        TableFormat::Csv => {
            let flat: Vec<BoundsReport> = reports.iter().flatten().cloned().collect();
            print!("{}", sweep_csv(&flat));
        }
        TableFormat::Json => {
            let rows: Vec<BoundsReport> = reports
                .iter()
                .flatten()
                .map(|r| if args.normalize { r.normalized() } else { r.clone() })
                .collect();
            println!("{}", jsonfmt::to_json_17(&rows));
        }
    }

    if let Some(path) = args.plot {
        let svg = render_bounds_svg(
            &BoundsSweep { m_list: args.m_list, gammas, reports },
            args.normalize,
        )?;
        std::fs::write(&path, svg)
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
