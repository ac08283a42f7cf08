//! D-optimality criteria for range-only localization, the min-max objective
//! and leakage, an independent empirical FIM route, and stealth-region
//! rasterization.
//!
//! For unit range vectors `u_i` from a point to each sensor and noise level
//! `sigma`, the 2x2 Fisher information matrix is `(1/sigma^2) sum u_i u_i^T`
//! and its determinant reduces to the pair-sum form
//!
//! ```text
//! I_k = (1/sigma^4) sum_{i<j} sin^2 theta_{ij,k}
//! J_i = (1/sigma^4) sum_{k<l} sin^2 beta_{kl,i}
//! ```
//!
//! (Lagrange identity). `det_fim` evaluates the pair sums; `empirical_fim_det`
//! assembles the matrix and takes the determinant, so the two routes check
//! each other.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{angles_from_scenario, subtended_angle, Point, Scenario, DEGENERACY_TOL};

/// Per-target and per-sensor D-optimality values of a scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FimReport {
    /// `I_k`: information the sensor network holds about each target.
    pub target_info: Vec<f64>,
    /// `J_i`: information the targets hold about each sensor.
    pub sensor_info: Vec<f64>,
    /// `min_k I_k`, the quantity the placement problem maximizes.
    pub objective: f64,
    /// `max_i J_i`, capped by `gamma^2` in the stealth constraint.
    pub leakage: f64,
}

/// Evaluates the pair-sum D-optimality criteria for every target and sensor.
pub fn det_fim(s: &Scenario) -> Result<FimReport> {
    let angles = angles_from_scenario(s)?;
    let inv_s4 = s.sigma().powi(-4);
    let target_info: Vec<f64> = (0..s.num_targets())
        .map(|k| {
            inv_s4
                * angles
                    .thetas_for_target(k)
                    .iter()
                    .map(|t| t.sin().powi(2))
                    .sum::<f64>()
        })
        .collect();
    let sensor_info: Vec<f64> = (0..s.num_sensors())
        .map(|i| {
            inv_s4
                * angles
                    .betas_for_sensor(i)
                    .iter()
                    .map(|b| b.sin().powi(2))
                    .sum::<f64>()
        })
        .collect();
    let objective = target_info.iter().copied().fold(f64::INFINITY, f64::min);
    let leakage = sensor_info.iter().copied().fold(0.0f64, f64::max);
    Ok(FimReport { target_info, sensor_info, objective, leakage })
}

/// Assembles the 2x2 FIM `(1/sigma^2) sum_i u_i u_i^T` for one target and
/// returns its determinant. Agrees with `det_fim`'s pair-sum entry for the
/// same target to machine precision; the two are independent code paths.
pub fn empirical_fim_det(s: &Scenario, target_index: usize) -> Result<f64> {
    if target_index >= s.num_targets() {
        return Err(Error::InvalidParameters(format!(
            "target index {target_index} out of range"
        )));
    }
    let t = s.targets()[target_index];
    let tol = DEGENERACY_TOL * s.diameter();
    let (mut fxx, mut fxy, mut fyy) = (0.0f64, 0.0f64, 0.0f64);
    for sp in s.sensors() {
        let r = *sp - t;
        let nr = r.norm();
        if nr <= tol {
            return Err(Error::DegenerateGeometry(
                "sensor coincides with the target".into(),
            ));
        }
        let (ux, uy) = (r.x / nr, r.y / nr);
        fxx += ux * ux;
        fxy += ux * uy;
        fyy += uy * uy;
    }
    let inv_s2 = s.sigma().powi(-2);
    Ok((fxx * fyy - fxy * fxy) * inv_s2 * inv_s2)
}

/// Whether `p` sees the segment `s1 s2` under an angle whose sine is at
/// least `eta`, i.e. lies inside the lens-complement level set
/// `subtended in [asin eta, pi - asin eta]`.
pub fn eta_region_test(p: Point, s1: Point, s2: Point, eta: f64) -> Result<bool> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameters(format!("eta must be in (0, 1], got {eta}")));
    }
    let angle = subtended_angle(p, s1, s2)?;
    let lo = eta.asin();
    Ok(angle >= lo && angle <= std::f64::consts::PI - lo)
}

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(min: Point, max: Point) -> Result<Self> {
        if !(min.x < max.x && min.y < max.y) || !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidParameters("empty or non-finite rectangle".into()));
        }
        Ok(Rect { min, max })
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

/// Boolean feasibility raster of the stealth constraint over a rectangle.
/// `mask` is row-major with `resolution` cells per axis, each cell classified
/// by its center.
#[derive(Debug, Clone)]
pub struct RegionRaster {
    pub bounds: Rect,
    pub resolution: usize,
    pub mask: Vec<bool>,
}

impl RegionRaster {
    pub fn cell_center(&self, ix: usize, iy: usize) -> Point {
        let sx = self.bounds.width() / self.resolution as f64;
        let sy = self.bounds.height() / self.resolution as f64;
        Point::new(
            self.bounds.min.x + (ix as f64 + 0.5) * sx,
            self.bounds.min.y + (iy as f64 + 0.5) * sy,
        )
    }

    pub fn get(&self, ix: usize, iy: usize) -> bool {
        self.mask[iy * self.resolution + ix]
    }

    pub fn feasible_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Number of 4-connected components of feasible cells.
    pub fn connected_components(&self) -> usize {
        let r = self.resolution;
        let mut seen = vec![false; self.mask.len()];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.mask.len() {
            if !self.mask[start] || seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(idx) = stack.pop() {
                let (ix, iy) = (idx % r, idx / r);
                let mut visit = |jx: usize, jy: usize| {
                    let j = jy * r + jx;
                    if self.mask[j] && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                };
                if ix > 0 {
                    visit(ix - 1, iy);
                }
                if ix + 1 < r {
                    visit(ix + 1, iy);
                }
                if iy > 0 {
                    visit(ix, iy - 1);
                }
                if iy + 1 < r {
                    visit(ix, iy + 1);
                }
            }
        }
        count
    }

    /// Binary PGM (P5), 255 = feasible, 0 = infeasible. Rows are written
    /// top-down, so the image y axis points up.
    pub fn write_pgm<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "P5")?;
        writeln!(w, "{} {}", self.resolution, self.resolution)?;
        writeln!(w, "255")?;
        for iy in (0..self.resolution).rev() {
            let row: Vec<u8> = (0..self.resolution)
                .map(|ix| if self.get(ix, iy) { 255u8 } else { 0u8 })
                .collect();
            w.write_all(&row)?;
        }
        Ok(())
    }

    /// Feasible/infeasible boundary as marching-squares segments over the
    /// grid of cell centers, in world coordinates.
    pub fn boundary_segments(&self) -> Vec<(Point, Point)> {
        let r = self.resolution;
        let mut segs = Vec::new();
        if r < 2 {
            return segs;
        }
        for iy in 0..r - 1 {
            for ix in 0..r - 1 {
                // Corner order: a = (ix,iy), b = (ix+1,iy), c = (ix+1,iy+1), d = (ix,iy+1).
                let a = self.get(ix, iy);
                let b = self.get(ix + 1, iy);
                let c = self.get(ix + 1, iy + 1);
                let d = self.get(ix, iy + 1);
                let code = (a as u8) | (b as u8) << 1 | (c as u8) << 2 | (d as u8) << 3;
                if code == 0 || code == 15 {
                    continue;
                }
                let pa = self.cell_center(ix, iy);
                let pb = self.cell_center(ix + 1, iy);
                let pc = self.cell_center(ix + 1, iy + 1);
                let pd = self.cell_center(ix, iy + 1);
                let mid = |p: Point, q: Point| Point::new(0.5 * (p.x + q.x), 0.5 * (p.y + q.y));
                let bottom = mid(pa, pb);
                let right = mid(pb, pc);
                let top = mid(pd, pc);
                let left = mid(pa, pd);
                match code {
                    1 | 14 => segs.push((left, bottom)),
                    2 | 13 => segs.push((bottom, right)),
                    3 | 12 => segs.push((left, right)),
                    4 | 11 => segs.push((right, top)),
                    6 | 9 => segs.push((bottom, top)),
                    7 | 8 => segs.push((left, top)),
                    5 => {
                        // Ambiguous saddle; both corners feasible on one diagonal.
                        segs.push((left, bottom));
                        segs.push((right, top));
                    }
                    10 => {
                        segs.push((bottom, right));
                        segs.push((left, top));
                    }
                    _ => unreachable!(),
                }
            }
        }
        segs
    }

    /// Self-contained SVG rendering of the boundary plus target markers.
    pub fn to_svg(&self, targets: &[Point]) -> String {
        let (w, h) = (640.0f64, 640.0f64);
        let sx = w / self.bounds.width();
        let sy = h / self.bounds.height();
        let map = |p: Point| -> (f64, f64) {
            ((p.x - self.bounds.min.x) * sx, h - (p.y - self.bounds.min.y) * sy)
        };
        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
             viewBox=\"0 0 {w} {h}\">\n<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
        ));
        out.push_str("<g stroke=\"#1f77b4\" stroke-width=\"1\">\n");
        for (p, q) in self.boundary_segments() {
            let (x1, y1) = map(p);
            let (x2, y2) = map(q);
            out.push_str(&format!(
                "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\"/>\n"
            ));
        }
        out.push_str("</g>\n<g fill=\"#d62728\">\n");
        for t in targets {
            let (cx, cy) = map(*t);
            out.push_str(&format!("<circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"4\"/>\n"));
        }
        out.push_str("</g>\n</svg>\n");
        out
    }
}

/// Rasterizes the stealth constraint `sum_{k<l} sin^2 beta_{kl} <= gamma^2`
/// over candidate sensor positions. Cells within the coincidence tolerance
/// of a target are infeasible.
pub fn stealth_region_raster(
    targets: &[Point],
    gamma: f64,
    bounds: Rect,
    resolution: usize,
) -> Result<RegionRaster> {
    if targets.len() < 2 {
        return Err(Error::InvalidParameters("need at least 2 targets".into()));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameters(format!("gamma must be in (0, 1], got {gamma}")));
    }
    if resolution < 2 {
        return Err(Error::InvalidParameters("resolution must be at least 2".into()));
    }
    let mut diam: f64 = 0.0;
    for i in 0..targets.len() {
        for j in (i + 1)..targets.len() {
            diam = diam.max(targets[i].dist(targets[j]));
        }
    }
    let tol = DEGENERACY_TOL * diam;
    let gamma2 = gamma * gamma;
    let raster = RegionRaster { bounds, resolution, mask: Vec::new() };
    let mask: Vec<bool> = (0..resolution * resolution)
        .into_par_iter()
        .map(|idx| {
            let (ix, iy) = (idx % resolution, idx / resolution);
            let p = raster.cell_center(ix, iy);
            let mut sum = 0.0;
            for k in 0..targets.len() {
                if p.dist(targets[k]) <= tol {
                    return false;
                }
                for l in (k + 1)..targets.len() {
                    match subtended_angle(p, targets[k], targets[l]) {
                        Ok(b) => sum += b.sin().powi(2),
                        Err(_) => return false,
                    }
                }
            }
            sum <= gamma2
        })
        .collect();
    Ok(RegionRaster { mask, ..raster })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn square_scenario() -> Scenario {
        Scenario::new(
            vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)],
            vec![Point::new(0.0, 1.0), Point::new(0.0, -1.0)],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn square_has_unit_information() {
        let rep = det_fim(&square_scenario()).unwrap();
        for v in rep.target_info.iter().chain(rep.sensor_info.iter()) {
            assert_relative_eq!(*v, 1.0, max_relative = 1e-12);
        }
        assert_relative_eq!(rep.objective, 1.0, max_relative = 1e-12);
        assert_relative_eq!(rep.leakage, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn empirical_identity_fim() {
        // Two sensors at right angles from the first target.
        let s = Scenario::new(
            vec![Point::new(0.0, 0.0), Point::new(5.0, 5.0)],
            vec![Point::new(1.0, 0.0), Point::new(0.0, 1.0)],
            1.0,
        )
        .unwrap();
        assert_relative_eq!(empirical_fim_det(&s, 0).unwrap(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn empirical_rank_one_for_collinear_sensors() {
        let s = Scenario::new(
            vec![Point::new(0.0, 0.0), Point::new(0.0, 3.0)],
            vec![Point::new(1.0, 0.0), Point::new(2.0, 0.0)],
            1.0,
        )
        .unwrap();
        assert!(empirical_fim_det(&s, 0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn sigma_scaling_is_quartic() {
        let s = square_scenario();
        let s2 = s.with_sigma(2.0).unwrap();
        let (a, b) = (det_fim(&s).unwrap(), det_fim(&s2).unwrap());
        for (x, y) in a.target_info.iter().zip(b.target_info.iter()) {
            assert_eq!(*y, *x / 16.0);
        }
    }

    #[test]
    fn eta_region_thales_circle() {
        let s1 = Point::new(-1.0, 0.0);
        let s2 = Point::new(1.0, 0.0);
        // On the circle with diameter |s1 s2| the subtended angle is pi/2.
        assert!(eta_region_test(Point::new(0.0, 1.0), s1, s2, 1.0).unwrap());
        // The midpoint sees the endpoints under pi, outside [asin 1, pi - asin 1].
        assert!(!eta_region_test(Point::new(0.0, 1e-9), s1, s2, 0.3).unwrap());
    }

    #[test]
    fn gamma_one_region_fully_feasible() {
        let targets = [Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
        let bounds = Rect::new(Point::new(-1.3, -1.1), Point::new(2.2, 1.4)).unwrap();
        let raster = stealth_region_raster(&targets, 1.0, bounds, 64).unwrap();
        assert_eq!(raster.feasible_count(), 64 * 64);
        assert_eq!(raster.connected_components(), 1);
    }

    #[test]
    fn pgm_header_and_payload_size() {
        let targets = [Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
        let bounds = Rect::new(Point::new(-1.0, -1.0), Point::new(2.0, 1.0)).unwrap();
        let raster = stealth_region_raster(&targets, 0.7, bounds, 32).unwrap();
        let mut buf = Vec::new();
        raster.write_pgm(&mut buf).unwrap();
        assert!(buf.starts_with(b"P5\n32 32\n255\n"));
        assert_eq!(buf.len(), b"P5\n32 32\n255\n".len() + 32 * 32);
    }

    #[test]
    fn marching_squares_emits_boundary() {
        let targets = [Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
        let bounds = Rect::new(Point::new(-1.0, -1.0), Point::new(2.0, 1.0)).unwrap();
        let raster = stealth_region_raster(&targets, 0.7, bounds, 64).unwrap();
        let segs = raster.boundary_segments();
        assert!(!segs.is_empty());
        let svg = raster.to_svg(&targets);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<line"));
    }
}
