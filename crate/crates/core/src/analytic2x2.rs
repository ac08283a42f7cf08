//! Complete treatment of the two-sensor/two-target problem: the seven-case
//! feasibility classifier for the quad angles, the angle-sum check, the two
//! constructive global optima with their verifier, and a positional grid
//! oracle that certifies the optima numerically.
//!
//! Case constraint sets over `(theta1, theta2, beta1, beta2)` in `[0, pi]^4`:
//!
//! ```text
//! C1:  theta1 + theta2 + beta1 + beta2 = 2 pi
//! C2: -theta1 + theta2 + beta1 + beta2 = 0,   theta2 <= theta1
//! C3:  theta1 - theta2 + beta1 + beta2 = 0,   theta1 <= theta2
//! C4:  theta1 + theta2 - beta1 + beta2 = 0,   beta2 <= beta1
//! C5:  theta1 + theta2 + beta1 - beta2 = 0,   beta1 <= beta2
//! C6:  theta1 - theta2 + beta1 - beta2 = 0,   theta1 + beta1 <= pi
//! C7:  theta1 - theta2 - beta1 + beta2 = 0,   theta1 + beta2 <= pi
//! ```
//!
//! Configurations on a case boundary legitimately carry several labels; with
//! interchangeable sensors C4/C5 and C6/C7 merge, but both labels are kept.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fim::det_fim;
use crate::geometry::{
    subtended_angle, target_frame, Point, QuadAngles, Scenario, DEGENERACY_TOL,
};

/// Default tolerance band (radians) around the case equality manifolds.
pub const DEFAULT_CASE_TOL: f64 = 1e-7;

/// Default placement of the diametral sensor pair: on the perpendicular
/// bisector of the target segment.
pub const SYMMETRIC_PHASE: f64 = FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
}

pub const ALL_CASES: [Case; 7] = [
    Case::C1,
    Case::C2,
    Case::C3,
    Case::C4,
    Case::C5,
    Case::C6,
    Case::C7,
];

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "C{}", *self as usize + 1)
    }
}

/// Classification outcome: matched cases plus the raw per-case residuals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseLabel {
    /// Cases whose equality and inequality hold within tolerance, ascending.
    pub labels: Vec<Case>,
    /// Signed equality residual of each case, radians.
    pub residuals: [f64; 7],
    /// Inequality slack of each case (infinite where there is none).
    pub slacks: [f64; 7],
}

impl CaseLabel {
    pub fn is_feasible(&self) -> bool {
        !self.labels.is_empty()
    }

    pub fn contains(&self, case: Case) -> bool {
        self.labels.contains(&case)
    }
}

/// Matches the quad against all seven constraint sets.
pub fn classify_case(q: &QuadAngles, tol: f64) -> CaseLabel {
    let QuadAngles { theta1: t1, theta2: t2, beta1: b1, beta2: b2 } = *q;
    let residuals = [
        t1 + t2 + b1 + b2 - 2.0 * PI,
        -t1 + t2 + b1 + b2,
        t1 - t2 + b1 + b2,
        t1 + t2 - b1 + b2,
        t1 + t2 + b1 - b2,
        t1 - t2 + b1 - b2,
        t1 - t2 - b1 + b2,
    ];
    let slacks = [
        f64::INFINITY,
        t1 - t2,
        t2 - t1,
        b1 - b2,
        b2 - b1,
        PI - t1 - b1,
        PI - t1 - b2,
    ];
    let labels = ALL_CASES
        .iter()
        .enumerate()
        .filter(|(i, _)| residuals[*i].abs() <= tol && slacks[*i] >= -tol)
        .map(|(_, c)| *c)
        .collect();
    CaseLabel { labels, residuals, slacks }
}

/// Angle-sum check: every feasible quad satisfies
/// `theta1 + theta2 + beta1 + beta2 <= 2 pi`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub satisfied: bool,
    /// `2 pi` minus the angle sum; nonnegative on feasible quads.
    pub slack: f64,
}

pub fn lemma1_check(q: &QuadAngles) -> Lemma1Report {
    let slack = 2.0 * PI - q.sum();
    Lemma1Report { satisfied: slack >= -1e-9, slack }
}

/// Builds the globally optimal free-placement configuration: both sensors
/// diametrically opposed on a circle of diameter `diameter` through neither
/// target but concyclic with both, so that each target sees the sensor pair
/// under a right angle.
///
/// `phase` is the angle of the first sensor on that circle, measured from
/// the target-frame axis; the placement freedom is exposed because any
/// non-degenerate phase is optimal. `SYMMETRIC_PHASE` puts the pair on the
/// perpendicular bisector.
pub fn theorem1_config(
    t1: Point,
    t2: Point,
    gamma: f64,
    diameter: f64,
    phase: f64,
) -> Result<Scenario> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameters(format!("gamma must be in (0, 1], got {gamma}")));
    }
    let (u, n, d) = target_frame(t1, t2)?;
    let required = d / gamma;
    if diameter < required * (1.0 - 1e-9) {
        return Err(Error::InfeasibleParameters(format!(
            "diameter {diameter} below d/gamma = {required}"
        )));
    }
    let r = 0.5 * diameter;
    let h = (r * r - 0.25 * d * d).max(0.0).sqrt();
    let center = t1 + u * (0.5 * d) + n * h;
    let dir = u * phase.cos() + n * phase.sin();
    let s1 = center + dir * r;
    let s2 = center + dir * (-r);
    Scenario::new(vec![t1, t2], vec![s1, s2], 1.0).map_err(|e| match e {
        Error::DegenerateGeometry(_) => Error::DegenerateGeometry(format!(
            "phase {phase} places a sensor on a target"
        )),
        other => other,
    })
}

/// Circumcircle (center, radius) of three points.
fn circumcircle(a: Point, b: Point, c: Point) -> Option<(Point, f64)> {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d.abs() < 1e-300 {
        return None;
    }
    let (na, nb, nc) = (
        a.x * a.x + a.y * a.y,
        b.x * b.x + b.y * b.y,
        c.x * c.x + c.y * c.y,
    );
    let ux = (na * (b.y - c.y) + nb * (c.y - a.y) + nc * (a.y - b.y)) / d;
    let uy = (na * (c.x - b.x) + nb * (a.x - c.x) + nc * (b.x - a.x)) / d;
    let center = Point::new(ux, uy);
    Some((center, center.dist(a)))
}

fn det4(m: [[f64; 4]; 4]) -> f64 {
    let det3 = |a: [[f64; 3]; 3]| -> f64 {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let mut acc = 0.0;
    for col in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for (ri, row) in m.iter().skip(1).enumerate() {
            let mut cj = 0;
            for (ci, v) in row.iter().enumerate() {
                if ci != col {
                    minor[ri][cj] = *v;
                    cj += 1;
                }
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * m[0][col] * det3(minor);
    }
    acc
}

/// Diagnostics from checking a 2x2 scenario against the free-placement
/// optimality conditions: concyclicity, diametral opposition, and a large
/// enough circumdiameter, plus the redundant right-angle and equal-sine
/// checks they imply.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Theorem1Diagnostics {
    pub concyclic: bool,
    /// Concyclicity determinant scaled by `diameter^4`.
    pub concyclicity_residual: f64,
    pub diametral: bool,
    pub diametral_residual: f64,
    pub diameter_ok: bool,
    pub circumdiameter: f64,
    pub required_diameter: f64,
    pub theta_right_angles: bool,
    pub beta_sines_equal: bool,
    pub theta: [f64; 2],
    pub beta: [f64; 2],
}

impl Theorem1Diagnostics {
    pub fn passed(&self) -> bool {
        self.concyclic
            && self.diametral
            && self.diameter_ok
            && self.theta_right_angles
            && self.beta_sines_equal
    }
}

/// Checks the three free-placement optimality conditions on an arbitrary
/// 2x2 scenario.
pub fn verify_theorem1(s: &Scenario, gamma: f64) -> Result<Theorem1Diagnostics> {
    if s.num_sensors() != 2 || s.num_targets() != 2 {
        return Err(Error::InvalidParameters("verification needs m = n = 2".into()));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameters(format!("gamma must be in (0, 1], got {gamma}")));
    }
    let (t1, t2) = (s.targets()[0], s.targets()[1]);
    let (s1, s2) = (s.sensors()[0], s.sensors()[1]);
    let diam = s.diameter();

    let row = |p: Point| [p.x * p.x + p.y * p.y, p.x, p.y, 1.0];
    let det = det4([row(t1), row(t2), row(s1), row(s2)]);
    let concyclicity_residual = det / diam.powi(4);
    let concyclic = concyclicity_residual.abs() <= 1e-9;

    let (circumdiameter, diametral_residual) = match circumcircle(t1, t2, s1) {
        Some((_, r)) => (2.0 * r, (s1.dist(s2) - 2.0 * r) / diam),
        None => (f64::NAN, f64::NAN),
    };
    let diametral = diametral_residual.is_finite() && diametral_residual.abs() <= 1e-9;

    let d = t1.dist(t2);
    let required_diameter = d / gamma;
    let diameter_ok =
        circumdiameter.is_finite() && circumdiameter >= required_diameter * (1.0 - 1e-9);

    let theta = [subtended_angle(t1, s1, s2)?, subtended_angle(t2, s1, s2)?];
    let beta = [subtended_angle(s1, t1, t2)?, subtended_angle(s2, t1, t2)?];
    let theta_right_angles =
        (theta[0] - FRAC_PI_2).abs() <= 1e-7 && (theta[1] - FRAC_PI_2).abs() <= 1e-7;
    let beta_sines_equal = (beta[0].sin() - beta[1].sin()).abs() <= 1e-7;

    Ok(Theorem1Diagnostics {
        concyclic,
        concyclicity_residual,
        diametral,
        diametral_residual,
        diameter_ok,
        circumdiameter,
        required_diameter,
        theta_right_angles,
        beta_sines_equal,
        theta,
        beta,
    })
}

/// Builds the globally optimal configuration when both sensors must lie
/// between the targets: the sensor pair and target pair form a
/// parallelogram, each sensor at the deepest point of one boundary arc of
/// the admissible lens. Yields objective `gamma^2`.
pub fn theorem2_config(t1: Point, t2: Point, gamma: f64) -> Result<Scenario> {
    if gamma >= 1.0 {
        return Err(Error::InfeasibleParameters(
            "gamma = 1 collapses both boundary circles onto the target circle".into(),
        ));
    }
    if gamma <= 0.0 {
        return Err(Error::InvalidParameters(format!("gamma must be in (0, 1), got {gamma}")));
    }
    let (u, n, d) = target_frame(t1, t2)?;
    let a = gamma.asin();
    // Lens half-depth: (d/2) tan(a/2).
    let depth = 0.5 * d * (0.5 * a).tan();
    let s1 = t1 + u * (0.5 * d) + n * depth;
    let s2 = (t1 + t2) - s1;
    Scenario::new(vec![t1, t2], vec![s1, s2], 1.0)
}

/// Which component of the stealth-feasible region the grid oracle searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Oracle2x2Mode {
    /// Whole feasible region (lens between the targets plus the outside).
    Unconstrained,
    /// Only the lens between the targets.
    BothBetween,
}

/// Exhaustive positional grid search over sensor pairs restricted to the
/// stealth-feasible region; returns the best `min(I_1, I_2)` found.
///
/// The search lattice has `resolution` points per axis including both
/// endpoints. In unconstrained mode it spans the bounding box of the circle
/// through both targets whose inscribed leakage sits exactly at the cap; in
/// both-between mode it spans the bounding box of the admissible lens. Both
/// boxes contain the analytically optimal configurations on lattice points.
pub fn oracle_2x2(
    t1: Point,
    t2: Point,
    gamma: f64,
    mode: Oracle2x2Mode,
    resolution: usize,
) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameters(format!("gamma must be in (0, 1], got {gamma}")));
    }
    if resolution < 50 {
        return Err(Error::InvalidParameters(format!(
            "resolution must be at least 50 per axis, got {resolution}"
        )));
    }
    let (_, _, d) = target_frame(t1, t2)?;
    // Canonical frame: angles are invariant under rigid motion, so the
    // search runs with targets at (0, 0) and (d, 0).
    let ct1 = Point::new(0.0, 0.0);
    let ct2 = Point::new(d, 0.0);
    let r = 0.5 * d / gamma;
    let h = r * (1.0 - gamma * gamma).max(0.0).sqrt();
    let (xmin, xmax, ymin, ymax) = match mode {
        Oracle2x2Mode::Unconstrained => (0.5 * d - r, 0.5 * d + r, h - r, h + r),
        Oracle2x2Mode::BothBetween => {
            let w = r - h;
            (0.0, d, -w, w)
        }
    };
    let gamma2 = gamma * gamma;
    // Slack absorbs rounding for lattice points exactly on the constraint
    // boundary, where the optima live.
    let feas_eps = 1e-12;
    let coincide = DEGENERACY_TOL * d;

    let nres = resolution as f64 - 1.0;
    let mut pts: Vec<[f64; 4]> = Vec::new();
    for iy in 0..resolution {
        let y = ymin + (ymax - ymin) * iy as f64 / nres;
        for ix in 0..resolution {
            let x = xmin + (xmax - xmin) * ix as f64 / nres;
            let p = Point::new(x, y);
            if p.dist(ct1) <= coincide || p.dist(ct2) <= coincide {
                continue;
            }
            let beta = subtended_angle(p, ct1, ct2).expect("coincidence excluded");
            if beta.sin().powi(2) > gamma2 + feas_eps {
                continue;
            }
            if mode == Oracle2x2Mode::BothBetween && beta <= FRAC_PI_2 {
                continue;
            }
            let phi1 = (p.y - ct1.y).atan2(p.x - ct1.x);
            let phi2 = (p.y - ct2.y).atan2(p.x - ct2.x);
            pts.push([phi1.sin(), phi1.cos(), phi2.sin(), phi2.cos()]);
        }
    }

    let best = (0..pts.len())
        .into_par_iter()
        .fold(
            || 0.0f64,
            |mut best, i| {
                let [s1i, c1i, s2i, c2i] = pts[i];
                for q in pts.iter().skip(i + 1) {
                    let x1 = s1i * q[1] - c1i * q[0];
                    let v1 = x1 * x1;
                    if v1 <= best {
                        continue;
                    }
                    let x2 = s2i * q[3] - c2i * q[2];
                    let v2 = x2 * x2;
                    let v = v1.min(v2);
                    if v > best {
                        best = v;
                    }
                }
                best
            },
        )
        .reduce(|| 0.0f64, f64::max);
    Ok(best)
}

/// Convenience: objective and leakage of a 2x2 scenario.
pub fn objective_and_leakage(s: &Scenario) -> Result<(f64, f64)> {
    let rep = det_fim(s)?;
    Ok((rep.objective, rep.leakage))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const GAMMA06_BETA: f64 = 2.498_091_544_796_509; // pi - asin(0.6)

    #[test]
    fn classify_right_angle_square() {
        let q = QuadAngles::new(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
        let label = classify_case(&q, DEFAULT_CASE_TOL);
        assert!(label.contains(Case::C1));
        assert!(label.is_feasible());
        assert!(label.residuals[0].abs() < 1e-12);
    }

    #[test]
    fn classify_same_side_right_angles() {
        let beta = 0.6f64.asin();
        let q = QuadAngles::new(FRAC_PI_2, FRAC_PI_2, beta, beta).unwrap();
        let label = classify_case(&q, DEFAULT_CASE_TOL);
        assert_eq!(label.labels, vec![Case::C6, Case::C7]);
    }

    #[test]
    fn classify_between_targets_optimum() {
        let a = 0.6f64.asin();
        let q = QuadAngles::new(a, a, PI - a, PI - a).unwrap();
        let label = classify_case(&q, DEFAULT_CASE_TOL);
        assert!(label.contains(Case::C1));
    }

    #[test]
    fn classify_infeasible_quad() {
        let q = QuadAngles::new(0.3, 0.9, 1.0, 2.0).unwrap();
        assert!(!classify_case(&q, DEFAULT_CASE_TOL).is_feasible());
    }

    #[test]
    fn lemma1_slack_on_c1_member() {
        let q = QuadAngles::new(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
        let rep = lemma1_check(&q);
        assert!(rep.satisfied);
        assert!(rep.slack.abs() < 1e-12);
    }

    #[test]
    fn lemma1_slack_on_c2_member() {
        let q = QuadAngles::new(0.8, 0.3, 0.25, 0.25).unwrap();
        let label = classify_case(&q, DEFAULT_CASE_TOL);
        assert!(label.contains(Case::C2));
        let rep = lemma1_check(&q);
        assert!(rep.satisfied);
        assert_relative_eq!(rep.slack, 2.0 * PI - 1.6, max_relative = 1e-12);
    }

    #[test]
    fn theorem1_objective_and_leakage() {
        let t1 = Point::new(0.0, 0.0);
        let t2 = Point::new(1.0, 0.0);
        let s = theorem1_config(t1, t2, 0.5, 2.0, SYMMETRIC_PHASE).unwrap();
        let (obj, leak) = objective_and_leakage(&s).unwrap();
        assert_relative_eq!(obj, 1.0, epsilon = 1e-12);
        assert_relative_eq!(leak, 0.25, epsilon = 1e-12);

        let s = theorem1_config(t1, t2, 0.5, 4.0, SYMMETRIC_PHASE).unwrap();
        let (obj, leak) = objective_and_leakage(&s).unwrap();
        assert_relative_eq!(obj, 1.0, epsilon = 1e-12);
        assert_relative_eq!(leak, 0.0625, epsilon = 1e-12);
    }

    #[test]
    fn theorem1_rejects_small_circle() {
        let t1 = Point::new(0.0, 0.0);
        let t2 = Point::new(1.0, 0.0);
        assert!(matches!(
            theorem1_config(t1, t2, 0.5, 1.9, SYMMETRIC_PHASE),
            Err(Error::InfeasibleParameters(_))
        ));
    }

    #[test]
    fn verifier_accepts_construction() {
        let s = theorem1_config(Point::new(0.4, -0.2), Point::new(1.7, 0.9), 0.5, 5.0, 1.1)
            .unwrap();
        assert!(verify_theorem1(&s, 0.5).unwrap().passed());
    }

    #[test]
    fn verifier_accepts_square_at_gamma_one() {
        let s = Scenario::new(
            vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)],
            vec![Point::new(0.0, 1.0), Point::new(0.0, -1.0)],
            1.0,
        )
        .unwrap();
        assert!(verify_theorem1(&s, 1.0).unwrap().passed());
    }

    #[test]
    fn verifier_flags_perturbed_sensor() {
        let t1 = Point::new(0.0, 0.0);
        let t2 = Point::new(1.0, 0.0);
        let good = theorem1_config(t1, t2, 0.5, 2.0, SYMMETRIC_PHASE).unwrap();
        let mut sensors = good.sensors().to_vec();
        sensors[0].x += 1e-3;
        let bad = Scenario::new(good.targets().to_vec(), sensors, 1.0).unwrap();
        let diag = verify_theorem1(&bad, 0.5).unwrap();
        assert!(!diag.passed());
        assert!(!diag.concyclic);
    }

    #[test]
    fn theorem2_reproduces_optimum() {
        let t1 = Point::new(0.0, 0.0);
        let t2 = Point::new(2.0, 0.0);
        let s = theorem2_config(t1, t2, 0.6).unwrap();
        let (obj, leak) = objective_and_leakage(&s).unwrap();
        assert_relative_eq!(obj, 0.36, epsilon = 1e-12);
        assert_relative_eq!(leak, 0.36, epsilon = 1e-12);
        let q = QuadAngles::from_scenario(&s).unwrap();
        assert_relative_eq!(q.beta1, GAMMA06_BETA, epsilon = 1e-12);
        assert_relative_eq!(q.beta2, GAMMA06_BETA, epsilon = 1e-12);
        assert!(classify_case(&q, DEFAULT_CASE_TOL).contains(Case::C1));
        // Parallelogram law: the sensor pair and target pair share a midpoint.
        let sum_s = s.sensors()[0] + s.sensors()[1];
        let sum_t = t1 + t2;
        assert_relative_eq!(sum_s.x, sum_t.x, epsilon = 1e-12);
        assert_relative_eq!(sum_s.y, sum_t.y, epsilon = 1e-12);
        // Angle-sum equality holds exactly at the optimum.
        assert!(lemma1_check(&q).slack.abs() < 1e-12);
    }

    #[test]
    fn theorem2_rejects_gamma_one() {
        assert!(matches!(
            theorem2_config(Point::new(0.0, 0.0), Point::new(1.0, 0.0), 1.0),
            Err(Error::InfeasibleParameters(_))
        ));
    }

    #[test]
    fn oracle_finds_between_optimum() {
        let best = oracle_2x2(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            0.6,
            Oracle2x2Mode::BothBetween,
            51,
        )
        .unwrap();
        assert!((best - 0.36).abs() <= 1e-9, "best = {best}");
    }

    #[test]
    fn oracle_finds_unconstrained_optimum() {
        let best = oracle_2x2(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            0.5,
            Oracle2x2Mode::Unconstrained,
            51,
        )
        .unwrap();
        assert!((best - 1.0).abs() <= 1e-9, "best = {best}");
        assert!(best <= 1.0 + 1e-12);
    }

    #[test]
    fn oracle_gamma_one_reaches_one() {
        let best = oracle_2x2(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            1.0,
            Oracle2x2Mode::Unconstrained,
            51,
        )
        .unwrap();
        assert!((best - 1.0).abs() <= 1e-9, "best = {best}");
    }
}
