//! Self-contained SVG emitters: the normalized bound-sweep panels and
//! two-sensor configuration diagrams. Inline styles only, fixed curve order
//! and fixed coordinate formatting so outputs are golden-file stable.

use crate::bounds::{uniform_asymptote, BoundsReport};
use crate::error::{Error, Result};
use crate::geometry::{target_frame, Point, Scenario};

const PANEL_W: f64 = 320.0;
const PANEL_H: f64 = 260.0;
const MARGIN_L: f64 = 48.0;
const MARGIN_R: f64 = 12.0;
const MARGIN_T: f64 = 26.0;
const MARGIN_B: f64 = 36.0;
const GAP: f64 = 16.0;

const COLOR_LB_DEGENERATE: &str = "#1f77b4";
const COLOR_LB_UNIFORM: &str = "#2ca02c";
const COLOR_UB_CONSTRAINT: &str = "#d62728";
const COLOR_UB_JENSEN: &str = "#9467bd";

/// One sweep: per entry of `m_list`, a report per gamma.
pub struct BoundsSweep {
    pub m_list: Vec<usize>,
    pub gammas: Vec<f64>,
    pub reports: Vec<Vec<BoundsReport>>,
}

fn polyline(points: &[(f64, f64)]) -> String {
    let coords: Vec<String> = points.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    coords.join(" ")
}

/// Renders one panel per sensor count: the four bound curves, the shaded
/// best-gap band and (in normalized mode) the large-m uniform asymptote.
pub fn render_bounds_svg(sweep: &BoundsSweep, normalized: bool) -> Result<String> {
    if sweep.m_list.is_empty() || sweep.gammas.is_empty() {
        return Err(Error::InvalidParameters("empty sweep".into()));
    }
    if sweep.reports.len() != sweep.m_list.len()
        || sweep.reports.iter().any(|r| r.len() != sweep.gammas.len())
    {
        return Err(Error::InvalidParameters("sweep shape mismatch".into()));
    }
    let panels = sweep.m_list.len();
    let total_w = panels as f64 * PANEL_W + (panels as f64 - 1.0) * GAP;
    let total_h = PANEL_H;
    let gmin = sweep.gammas.first().copied().unwrap();
    let gmax = sweep.gammas.last().copied().unwrap();
    let gspan = (gmax - gmin).max(1e-12);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total_w:.0}\" height=\"{total_h:.0}\" \
         viewBox=\"0 0 {total_w:.0} {total_h:.0}\" font-family=\"sans-serif\" font-size=\"11\">\n"
    ));
    out.push_str(&format!(
        "<rect width=\"{total_w:.0}\" height=\"{total_h:.0}\" fill=\"white\"/>\n"
    ));

    for (pi, (&m, reports)) in sweep.m_list.iter().zip(&sweep.reports).enumerate() {
        let ox = pi as f64 * (PANEL_W + GAP);
        let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
        let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
        let norm = |r: &BoundsReport| if normalized { r.normalized() } else { r.clone() };
        let rows: Vec<BoundsReport> = reports.iter().map(norm).collect();
        let ymax = rows
            .iter()
            .flat_map(|r| [r.ub_constraint, r.ub_jensen])
            .fold(0.0f64, f64::max)
            .max(1e-9);
        let to_xy = |g: f64, v: f64| -> (f64, f64) {
            (
                ox + MARGIN_L + (g - gmin) / gspan * plot_w,
                MARGIN_T + (1.0 - (v / ymax).min(1.0)) * plot_h,
            )
        };

        out.push_str(&format!("<g class=\"panel\" id=\"panel-m{m}\">\n"));
        // Frame and title.
        out.push_str(&format!(
            "<rect x=\"{:.3}\" y=\"{MARGIN_T:.3}\" width=\"{plot_w:.3}\" height=\"{plot_h:.3}\" \
             fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n",
            ox + MARGIN_L
        ));
        out.push_str(&format!(
            "<text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"middle\">m = {m}</text>\n",
            ox + MARGIN_L + 0.5 * plot_w,
            MARGIN_T - 9.0
        ));
        // Ticks.
        for t in 0..=4 {
            let g = gmin + gspan * t as f64 / 4.0;
            let (x, _) = to_xy(g, 0.0);
            out.push_str(&format!(
                "<line x1=\"{x:.3}\" y1=\"{:.3}\" x2=\"{x:.3}\" y2=\"{:.3}\" stroke=\"#333\"/>\n",
                MARGIN_T + plot_h,
                MARGIN_T + plot_h + 4.0
            ));
            out.push_str(&format!(
                "<text x=\"{x:.3}\" y=\"{:.3}\" text-anchor=\"middle\">{g:.2}</text>\n",
                MARGIN_T + plot_h + 16.0
            ));
            let v = ymax * t as f64 / 4.0;
            let (_, y) = to_xy(gmin, v);
            out.push_str(&format!(
                "<line x1=\"{:.3}\" y1=\"{y:.3}\" x2=\"{:.3}\" y2=\"{y:.3}\" stroke=\"#333\"/>\n",
                ox + MARGIN_L - 4.0,
                ox + MARGIN_L
            ));
            out.push_str(&format!(
                "<text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"end\">{v:.2}</text>\n",
                ox + MARGIN_L - 6.0,
                y + 3.5
            ));
        }
        out.push_str(&format!(
            "<text x=\"{:.3}\" y=\"{:.3}\" text-anchor=\"middle\">gamma</text>\n",
            ox + MARGIN_L + 0.5 * plot_w,
            MARGIN_T + plot_h + 30.0
        ));

        // Shaded gap between the best bounds.
        let mut band: Vec<(f64, f64)> = sweep
            .gammas
            .iter()
            .zip(&rows)
            .map(|(&g, r)| to_xy(g, r.best_ub))
            .collect();
        let lower: Vec<(f64, f64)> = sweep
            .gammas
            .iter()
            .zip(&rows)
            .rev()
            .map(|(&g, r)| to_xy(g, r.best_lb))
            .collect();
        band.extend(lower);
        out.push_str(&format!(
            "<polygon class=\"gap-band\" points=\"{}\" fill=\"#999\" opacity=\"0.25\" \
             stroke=\"none\"/>\n",
            polyline(&band)
        ));

        // The four curves, fixed order.
        let curves: [(&str, &str, Box<dyn Fn(&BoundsReport) -> f64>); 4] = [
            ("lb-degenerate", COLOR_LB_DEGENERATE, Box::new(|r| r.lb_degenerate)),
            ("lb-uniform", COLOR_LB_UNIFORM, Box::new(|r| r.lb_uniform)),
            ("ub-constraint", COLOR_UB_CONSTRAINT, Box::new(|r| r.ub_constraint)),
            ("ub-jensen", COLOR_UB_JENSEN, Box::new(|r| r.ub_jensen)),
        ];
        for (class, color, f) in &curves {
            let pts: Vec<(f64, f64)> = sweep
                .gammas
                .iter()
                .zip(&rows)
                .map(|(&g, r)| to_xy(g, f(r)))
                .collect();
            out.push_str(&format!(
                "<polyline class=\"{class}\" points=\"{}\" fill=\"none\" stroke=\"{color}\" \
                 stroke-width=\"1.5\"/>\n",
                polyline(&pts)
            ));
        }

        // Large-m uniform asymptote; only meaningful normalized.
        if normalized {
            let pts: Vec<(f64, f64)> = sweep
                .gammas
                .iter()
                .map(|&g| to_xy(g, uniform_asymptote(g).unwrap_or(0.0)))
                .collect();
            out.push_str(&format!(
                "<polyline class=\"asymptote\" points=\"{}\" fill=\"none\" stroke=\"#000\" \
                 stroke-width=\"1\" stroke-dasharray=\"4,3\"/>\n",
                polyline(&pts)
            ));
        }

        if pi == 0 {
            let entries = [
                ("degenerate lb", COLOR_LB_DEGENERATE),
                ("uniform lb", COLOR_LB_UNIFORM),
                ("pair-count ub", COLOR_UB_CONSTRAINT),
                ("envelope ub", COLOR_UB_JENSEN),
            ];
            for (li, (name, color)) in entries.iter().enumerate() {
                let y = MARGIN_T + 12.0 + 13.0 * li as f64;
                let x = ox + MARGIN_L + 8.0;
                out.push_str(&format!(
                    "<line x1=\"{x:.3}\" y1=\"{y:.3}\" x2=\"{:.3}\" y2=\"{y:.3}\" \
                     stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                    x + 16.0
                ));
                out.push_str(&format!(
                    "<text x=\"{:.3}\" y=\"{:.3}\">{name}</text>\n",
                    x + 20.0,
                    y + 3.5
                ));
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Diagram of a two-sensor scenario: targets, sensors, the two leakage
/// boundary circles through the targets and, dotted, the circumcircle of
/// the sensor pair with the first target.
pub fn render_config_svg(s: &Scenario, gamma: f64) -> Result<String> {
    if s.num_targets() != 2 {
        return Err(Error::InvalidParameters("diagram needs exactly 2 targets".into()));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameters(format!("gamma must be in (0, 1], got {gamma}")));
    }
    let (t1, t2) = (s.targets()[0], s.targets()[1]);
    let (_, n, d) = target_frame(t1, t2)?;
    let r = 0.5 * d / gamma;
    let h = r * (1.0 - gamma * gamma).max(0.0).sqrt();
    let mid = Point::new(0.5 * (t1.x + t2.x), 0.5 * (t1.y + t2.y));
    let c_left = mid + n * h;
    let c_right = mid + n * (-h);

    // World window: everything of interest plus margin.
    let mut pts = vec![t1, t2];
    pts.extend_from_slice(s.sensors());
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for c in [c_left, c_right] {
        xmin = xmin.min(c.x - r);
        xmax = xmax.max(c.x + r);
        ymin = ymin.min(c.y - r);
        ymax = ymax.max(c.y + r);
    }
    for p in &pts {
        xmin = xmin.min(p.x);
        xmax = xmax.max(p.x);
        ymin = ymin.min(p.y);
        ymax = ymax.max(p.y);
    }
    let span = (xmax - xmin).max(ymax - ymin) * 1.1;
    let cx = 0.5 * (xmin + xmax);
    let cy = 0.5 * (ymin + ymax);
    let size = 480.0;
    let scale = size / span;
    let map = |p: Point| -> (f64, f64) {
        ((p.x - cx) * scale + size / 2.0, size / 2.0 - (p.y - cy) * scale)
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" \
         viewBox=\"0 0 {size} {size}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>\n"
    ));
    for c in [c_left, c_right] {
        let (x, y) = map(c);
        out.push_str(&format!(
            "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"#2ca02c\" \
             stroke-width=\"1\"/>\n",
            r * scale
        ));
    }
    if s.num_sensors() == 2 {
        // Circumcircle of (t1, t2, s1), the free-placement circle.
        let (a, b, c) = (t1, t2, s.sensors()[0]);
        let det = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
        if det.abs() > 1e-12 * d * d {
            let (na, nb, nc) = (
                a.x * a.x + a.y * a.y,
                b.x * b.x + b.y * b.y,
                c.x * c.x + c.y * c.y,
            );
            let ux = (na * (b.y - c.y) + nb * (c.y - a.y) + nc * (a.y - b.y)) / det;
            let uy = (na * (c.x - b.x) + nb * (a.x - c.x) + nc * (b.x - a.x)) / det;
            let cc = Point::new(ux, uy);
            let rr = cc.dist(a);
            let (x, y) = map(cc);
            out.push_str(&format!(
                "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"#555\" \
                 stroke-width=\"1\" stroke-dasharray=\"3,3\"/>\n",
                rr * scale
            ));
        }
    }
    let (x1, y1) = map(t1);
    let (x2, y2) = map(t2);
    out.push_str(&format!(
        "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"#bbb\" \
         stroke-width=\"1\"/>\n"
    ));
    for (i, t) in s.targets().iter().enumerate() {
        let (x, y) = map(*t);
        out.push_str(&format!(
            "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"5\" fill=\"#d62728\"/>\n\
             <text x=\"{:.3}\" y=\"{:.3}\">t{}</text>\n",
            x + 8.0,
            y - 6.0,
            i + 1
        ));
    }
    for (i, sp) in s.sensors().iter().enumerate() {
        let (x, y) = map(*sp);
        out.push_str(&format!(
            "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"8\" height=\"8\" fill=\"#2ca02c\"/>\n\
             <text x=\"{:.3}\" y=\"{:.3}\">s{}</text>\n",
            x - 4.0,
            y - 4.0,
            x + 8.0,
            y + 14.0,
            i + 1
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic2x2::{theorem2_config, SYMMETRIC_PHASE};
    use crate::bounds::best_bounds;

    #[test]
    fn bounds_svg_has_expected_panels_and_curves() {
        let gammas: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
        let m_list = vec![3usize, 6, 9];
        let reports = m_list
            .iter()
            .map(|&m| gammas.iter().map(|&g| best_bounds(m, g).unwrap()).collect())
            .collect();
        let svg =
            render_bounds_svg(&BoundsSweep { m_list, gammas, reports }, true).unwrap();
        assert_eq!(svg.matches("class=\"panel\"").count(), 3);
        assert_eq!(svg.matches("class=\"lb-degenerate\"").count(), 3);
        assert_eq!(svg.matches("class=\"asymptote\"").count(), 3);
        assert_eq!(svg.matches("class=\"gap-band\"").count(), 3);
    }

    #[test]
    fn config_svg_renders_theorem2_diagram() {
        let s = theorem2_config(
            crate::geometry::Point::new(0.0, 0.0),
            crate::geometry::Point::new(1.0, 0.0),
            0.6,
        )
        .unwrap();
        let svg = render_config_svg(&s, 0.6).unwrap();
        assert!(svg.contains(">t1<") && svg.contains(">s2<"));
        assert!(svg.matches("<circle").count() >= 4);
        let _ = SYMMETRIC_PHASE;
    }
}
