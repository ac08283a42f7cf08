use clap::Args;

use super::load_targets;
use crate::Failure;
use stealth_place::fim::{stealth_region_raster, Rect};
use stealth_place::geometry::Point;

fn parse_bounds(s: &str) -> Result<Rect, String> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if vals.len() != 4 {
        return Err(format!("expected 'xmin,ymin,xmax,ymax', got '{s}'"));
    }
    Rect::new(Point::new(vals[0], vals[1]), Point::new(vals[2], vals[3]))
        .map_err(|e| e.to_string())
}

#[derive(Args)]
pub struct RegionArgs {
    /// JSON file with a "targets" array of [x, y] pairs.
    #[arg(long)]
    targets: std::path::PathBuf,

    #[arg(long)]
    gamma: f64,

    /// Window as "xmin,ymin,xmax,ymax".
    #[arg(long, value_parser = parse_bounds, allow_hyphen_values = true)]
    bounds: Rect,

    /// Grid cells per axis.
    #[arg(long, default_value_t = 256)]
    res: usize,

    /// Output path; .pgm gets the mask, .svg the boundary contour.
    #[arg(long)]
    out: std::path::PathBuf,
}

pub fn run(args: RegionArgs) -> Result<(), Failure> {
    let targets = load_targets(&args.targets)?;
    let bounds = args.bounds;
    let raster = stealth_region_raster(&targets, args.gamma, bounds, args.res)?;
    match args.out.extension().and_then(|e| e.to_str()) {
        Some("pgm") => {
            let mut file = std::fs::File::create(&args.out)
                .map_err(|e| Failure::io(format!("cannot create {}: {e}", args.out.display())))?;
            raster
                .write_pgm(&mut file)
                .map_err(|e| Failure::io(format!("cannot write {}: {e}", args.out.display())))?;
        }
        Some("svg") => {
            std::fs::write(&args.out, raster.to_svg(&targets))
                .map_err(|e| Failure::io(format!("cannot write {}: {e}", args.out.display())))?;
        }
        _ => {
            return Err(Failure::usage(format!(
                "output path {} must end in .pgm or .svg",
                args.out.display()
            )))
        }
    }
    println!(
        "components={} feasible={} cells={}",
        raster.connected_components(),
        raster.feasible_count(),
        args.res * args.res
    );
    Ok(())
}
