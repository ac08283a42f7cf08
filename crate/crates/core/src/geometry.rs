//! Geometric primitives: planar points, sensor/target scenarios, subtended
//! angles and the heading-angle parameterization of the two-target problem.
//!
//! Conventions
//! - `theta[i,j,k]` is the unsigned angle between sensors `i` and `j` seen
//!   from target `k`; `beta[k,l,i]` is the unsigned angle between targets `k`
//!   and `l` seen from sensor `i`. Both live in `[0, pi]`.
//! - Heading angles `alpha[i][k]` measure the direction of sensor `i` from
//!   target `k` against the line joining the two targets. Sign convention:
//!   positive when the sensor lies right of the center-line walking from the
//!   first target to the second (canonical frame: `t1 = (0,0)`,
//!   `t2 = (d,0)`, right means `y < 0`).
//! - Coincidence tolerance is `1e-9` relative to the scenario diameter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative coincidence threshold: points closer than this times the local
/// scale are treated as coincident.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Point { x: v[0], y: v[1] }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

pub fn dot(a: Point, b: Point) -> f64 {
    a.x * b.x + a.y * b.y
}

pub fn cross(a: Point, b: Point) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Orthonormal frame of a target pair: unit vector `u` from `t1` towards
/// `t2`, left normal `n` (counter-clockwise rotation of `u`) and the
/// separation `d`.
pub(crate) fn target_frame(t1: Point, t2: Point) -> Result<(Point, Point, f64)> {
    let d = t1.dist(t2);
    if d <= 0.0 || !d.is_finite() {
        return Err(Error::DegenerateGeometry(
            "targets coincide; no center-line exists".into(),
        ));
    }
    let u = (t2 - t1) * (1.0 / d);
    let n = Point::new(-u.y, u.x);
    Ok((u, n, d))
}

/// Explicit sensor and target positions plus the range-noise level.
///
/// Invariants, checked at construction: at least two targets and two
/// sensors, finite coordinates, `sigma > 0`, and no sensor within
/// `1e-9 * diameter` of any target.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ScenarioFile", into = "ScenarioFile")]
pub struct Scenario {
    targets: Vec<Point>,
    sensors: Vec<Point>,
    sigma: f64,
}

/// Wire schema: `{"targets": [[x,y],...], "sensors": [[x,y],...], "sigma": s}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScenarioFile {
    targets: Vec<[f64; 2]>,
    sensors: Vec<[f64; 2]>,
    sigma: f64,
}

impl TryFrom<ScenarioFile> for Scenario {
    type Error = Error;
    fn try_from(f: ScenarioFile) -> Result<Scenario> {
        Scenario::new(
            f.targets.into_iter().map(Point::from).collect(),
            f.sensors.into_iter().map(Point::from).collect(),
            f.sigma,
        )
    }
}

impl From<Scenario> for ScenarioFile {
    fn from(s: Scenario) -> ScenarioFile {
        ScenarioFile {
            targets: s.targets.into_iter().map(<[f64; 2]>::from).collect(),
            sensors: s.sensors.into_iter().map(<[f64; 2]>::from).collect(),
            sigma: s.sigma,
        }
    }
}

impl Scenario {
    pub fn new(targets: Vec<Point>, sensors: Vec<Point>, sigma: f64) -> Result<Self> {
        if targets.len() < 2 || sensors.len() < 2 {
            return Err(Error::InvalidParameters(format!(
                "need at least 2 targets and 2 sensors, got n={} m={}",
                targets.len(),
                sensors.len()
            )));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameters(format!("sigma must be > 0, got {sigma}")));
        }
        for p in targets.iter().chain(sensors.iter()) {
            if !p.is_finite() {
                return Err(Error::InvalidParameters("non-finite coordinate".into()));
            }
        }
        let s = Scenario { targets, sensors, sigma };
        let tol = DEGENERACY_TOL * s.diameter();
        for (i, sp) in s.sensors.iter().enumerate() {
            for (k, tp) in s.targets.iter().enumerate() {
                if sp.dist(*tp) <= tol {
                    return Err(Error::DegenerateGeometry(format!(
                        "sensor {i} coincides with target {k}"
                    )));
                }
            }
        }
        Ok(s)
    }

    pub fn targets(&self) -> &[Point] {
        &self.targets
    }

    pub fn sensors(&self) -> &[Point] {
        &self.sensors
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Same geometry with a different noise level.
    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        Scenario::new(self.targets.clone(), self.sensors.clone(), sigma)
    }

    pub fn num_targets(&self) -> usize {
        self.targets.len()
    }

    pub fn num_sensors(&self) -> usize {
        self.sensors.len()
    }

    /// Largest pairwise distance over all points; the scale used by the
    /// coincidence tolerance.
    pub fn diameter(&self) -> f64 {
        let all: Vec<Point> = self.targets.iter().chain(self.sensors.iter()).copied().collect();
        let mut best: f64 = 0.0;
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                best = best.max(all[i].dist(all[j]));
            }
        }
        best
    }
}

/// Unsigned angle `a`-`apex`-`b` in `[0, pi]` via `atan2(|cross|, dot)`,
/// which is exactly symmetric in its last two arguments.
pub fn subtended_angle(apex: Point, a: Point, b: Point) -> Result<f64> {
    let u = a - apex;
    let v = b - apex;
    let (nu, nv) = (u.norm(), v.norm());
    let scale = nu.max(nv);
    if scale <= 0.0 || nu <= DEGENERACY_TOL * scale || nv <= DEGENERACY_TOL * scale {
        return Err(Error::DegenerateGeometry(
            "apex coincides with an endpoint".into(),
        ));
    }
    Ok(cross(u, v).abs().atan2(dot(u, v)))
}

/// Index of the unordered pair `(i, j)`, `i < j`, among `count` items in
/// lexicographic order.
pub fn pair_index(i: usize, j: usize, count: usize) -> usize {
    debug_assert!(i < j && j < count);
    i * count - i * (i + 1) / 2 + (j - i - 1)
}

/// Number of unordered pairs of `count` items.
pub fn pair_count(count: usize) -> usize {
    count * (count.max(1) - 1) / 2
}

/// All subtended angles of a scenario.
///
/// `theta` is stored per sensor pair `(i < j)` and target `k`; `beta` per
/// target pair `(k < l)` and sensor `i`.
#[derive(Debug, Clone)]
pub struct ScenarioAngles {
    num_sensors: usize,
    num_targets: usize,
    theta: Vec<f64>,
    beta: Vec<f64>,
}

impl ScenarioAngles {
    pub fn theta(&self, i: usize, j: usize, k: usize) -> f64 {
        self.theta[pair_index(i, j, self.num_sensors) * self.num_targets + k]
    }

    pub fn beta(&self, k: usize, l: usize, i: usize) -> f64 {
        self.beta[pair_index(k, l, self.num_targets) * self.num_sensors + i]
    }

    /// Theta values for a fixed target, in sensor-pair order.
    pub fn thetas_for_target(&self, k: usize) -> Vec<f64> {
        (0..pair_count(self.num_sensors))
            .map(|p| self.theta[p * self.num_targets + k])
            .collect()
    }

    /// Beta values for a fixed sensor, in target-pair order.
    pub fn betas_for_sensor(&self, i: usize) -> Vec<f64> {
        (0..pair_count(self.num_targets))
            .map(|p| self.beta[p * self.num_sensors + i])
            .collect()
    }
}

/// Computes every `theta[i,j,k]` and `beta[k,l,i]` of a scenario.
pub fn angles_from_scenario(s: &Scenario) -> Result<ScenarioAngles> {
    let m = s.num_sensors();
    let n = s.num_targets();
    let mut theta = vec![0.0; pair_count(m) * n];
    let mut beta = vec![0.0; pair_count(n) * m];
    for i in 0..m {
        for j in (i + 1)..m {
            for k in 0..n {
                theta[pair_index(i, j, m) * n + k] =
                    subtended_angle(s.targets[k], s.sensors[i], s.sensors[j])?;
            }
        }
    }
    for k in 0..n {
        for l in (k + 1)..n {
            for i in 0..m {
                beta[pair_index(k, l, n) * m + i] =
                    subtended_angle(s.sensors[i], s.targets[k], s.targets[l])?;
            }
        }
    }
    Ok(ScenarioAngles { num_sensors: m, num_targets: n, theta, beta })
}

/// The four angles of the two-sensor/two-target problem, each in `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl QuadAngles {
    pub fn new(theta1: f64, theta2: f64, beta1: f64, beta2: f64) -> Result<Self> {
        for (name, v) in [("theta1", theta1), ("theta2", theta2), ("beta1", beta1), ("beta2", beta2)] {
            if !(v.is_finite() && (-1e-12..=std::f64::consts::PI + 1e-12).contains(&v)) {
                return Err(Error::InvalidParameters(format!("{name} = {v} outside [0, pi]")));
            }
        }
        Ok(QuadAngles { theta1, theta2, beta1, beta2 })
    }

    /// Extracts the quad from a 2x2 scenario.
    pub fn from_scenario(s: &Scenario) -> Result<Self> {
        if s.num_sensors() != 2 || s.num_targets() != 2 {
            return Err(Error::InvalidParameters(format!(
                "quad angles need m = n = 2, got m={} n={}",
                s.num_sensors(),
                s.num_targets()
            )));
        }
        let angles = angles_from_scenario(s)?;
        QuadAngles::new(
            angles.theta(0, 1, 0),
            angles.theta(0, 1, 1),
            angles.beta(0, 1, 0),
            angles.beta(0, 1, 1),
        )
    }

    pub fn sum(&self) -> f64 {
        self.theta1 + self.theta2 + self.beta1 + self.beta2
    }
}

/// Heading-angle description of `m` sensors against two targets, together
/// with the leakage level that bounds the headings.
///
/// Row invariants (tolerance `1e-9`): `|alpha[i][0] + alpha[i][1]|` at most
/// `asin(gamma)`, both entries share a sign (product nonnegative), and each
/// entry is at most `asin(gamma)` in magnitude.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "HeadingConfigFile", into = "HeadingConfigFile")]
pub struct HeadingConfig {
    alpha: Vec<[f64; 2]>,
    gamma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct HeadingConfigFile {
    alpha: Vec<[f64; 2]>,
    gamma: f64,
}

impl TryFrom<HeadingConfigFile> for HeadingConfig {
    type Error = Error;
    fn try_from(f: HeadingConfigFile) -> Result<HeadingConfig> {
        HeadingConfig::new(f.alpha, f.gamma)
    }
}

impl From<HeadingConfig> for HeadingConfigFile {
    fn from(c: HeadingConfig) -> HeadingConfigFile {
        HeadingConfigFile { alpha: c.alpha, gamma: c.gamma }
    }
}

const HEADING_TOL: f64 = 1e-9;

impl HeadingConfig {
    pub fn new(alpha: Vec<[f64; 2]>, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidParameters(format!("gamma must be in (0, 1], got {gamma}")));
        }
        let cap = gamma.asin();
        for (i, row) in alpha.iter().enumerate() {
            let [a1, a2] = *row;
            if !a1.is_finite() || !a2.is_finite() {
                return Err(Error::InvalidParameters(format!("row {i}: non-finite heading")));
            }
            if (a1 + a2).abs() > cap + HEADING_TOL {
                return Err(Error::InvalidParameters(format!(
                    "row {i}: |alpha1 + alpha2| = {} exceeds asin(gamma) = {cap}",
                    (a1 + a2).abs()
                )));
            }
            if a1 * a2 < -HEADING_TOL {
                return Err(Error::InvalidParameters(format!(
                    "row {i}: headings have opposite signs ({a1}, {a2})"
                )));
            }
            if a1.abs() > cap + HEADING_TOL || a2.abs() > cap + HEADING_TOL {
                return Err(Error::InvalidParameters(format!(
                    "row {i}: heading magnitude exceeds asin(gamma) = {cap}"
                )));
            }
        }
        Ok(HeadingConfig { alpha, gamma })
    }

    pub fn alpha(&self) -> &[[f64; 2]] {
        &self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn num_sensors(&self) -> usize {
        self.alpha.len()
    }

    /// `asin(gamma)`, the heading cap.
    pub fn max_heading(&self) -> f64 {
        self.gamma.asin()
    }
}

/// Realizes a heading configuration as Cartesian positions with the targets
/// at `(0, 0)` and `(d, 0)` and `sigma = 1`.
///
/// Sensor `i` is the intersection of the ray from `t1` at heading
/// `alpha[i][0]` with the ray from `t2` at heading `alpha[i][1]`:
///
/// ```text
/// x = d sin|a2| cos|a1| / sin(|a1| + |a2|)
/// y = -sign * d sin|a1| sin|a2| / sin(|a1| + |a2|)
/// ```
///
/// equivalent to `x = d tan|a2| / (tan|a1| + tan|a2|)`, but stable when a
/// heading reaches `pi/2`. A row of two zeros has parallel rays and is
/// rejected; a row with exactly one zero intersects at a target and is
/// rejected by the scenario coincidence check.
pub fn positions_from_headings(cfg: &HeadingConfig, d: f64) -> Result<Scenario> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::InvalidParameters(format!("target separation must be > 0, got {d}")));
    }
    let mut sensors = Vec::with_capacity(cfg.num_sensors());
    for (i, row) in cfg.alpha().iter().enumerate() {
        let [a1, a2] = *row;
        if a1 == 0.0 && a2 == 0.0 {
            return Err(Error::DegenerateGeometry(format!(
                "row {i}: both headings zero (parallel rays along the center-line)"
            )));
        }
        let sign = if a1 + a2 != 0.0 { (a1 + a2).signum() } else { a1.signum() };
        let (s1, c1) = a1.abs().sin_cos();
        let s2 = a2.abs().sin();
        let denom = (a1.abs() + a2.abs()).sin();
        let x = d * s2 * c1 / denom;
        let y = -sign * d * s1 * s2 / denom;
        sensors.push(Point::new(x, y));
    }
    Scenario::new(vec![Point::new(0.0, 0.0), Point::new(d, 0.0)], sensors, 1.0)
}

/// Pair angles computed directly from headings, no Cartesian round trip:
/// `theta[i,j,k] = |alpha[i][k] - alpha[j][k]|` and
/// `beta[i] = pi - |alpha[i][0] + alpha[i][1]|`.
#[derive(Debug, Clone)]
pub struct PairAngles {
    /// Indexed per sensor pair `(i < j)`, entries `[theta_k1, theta_k2]`.
    pub theta: Vec<[f64; 2]>,
    /// One beta per sensor.
    pub beta: Vec<f64>,
}

pub fn headings_to_pair_angles(cfg: &HeadingConfig) -> PairAngles {
    let m = cfg.num_sensors();
    let alpha = cfg.alpha();
    let mut theta = Vec::with_capacity(pair_count(m));
    for i in 0..m {
        for j in (i + 1)..m {
            theta.push([
                (alpha[i][0] - alpha[j][0]).abs(),
                (alpha[i][1] - alpha[j][1]).abs(),
            ]);
        }
    }
    let beta = alpha
        .iter()
        .map(|row| std::f64::consts::PI - (row[0] + row[1]).abs())
        .collect();
    PairAngles { theta, beta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn subtended_orthogonal_rays() {
        let a = subtended_angle(Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0))
            .unwrap();
        assert_relative_eq!(a, FRAC_PI_2, max_relative = 1e-15);
    }

    #[test]
    fn subtended_collinear_same_side() {
        let a = subtended_angle(Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0))
            .unwrap();
        assert_eq!(a, 0.0);
    }

    #[test]
    fn subtended_antipodal_rays() {
        let a = subtended_angle(Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(-3.0, 1e-12))
            .unwrap();
        assert!((a - PI).abs() < 1e-12);
    }

    #[test]
    fn subtended_rejects_coincident_apex() {
        let err = subtended_angle(Point::new(0.0, 0.0), Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        assert!(matches!(err, Err(Error::DegenerateGeometry(_))));
    }

    #[test]
    fn square_scenario_all_right_angles() {
        let s = Scenario::new(
            vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)],
            vec![Point::new(0.0, 1.0), Point::new(0.0, -1.0)],
            1.0,
        )
        .unwrap();
        let a = angles_from_scenario(&s).unwrap();
        assert_relative_eq!(a.theta(0, 1, 0), FRAC_PI_2, max_relative = 1e-12);
        assert_relative_eq!(a.theta(0, 1, 1), FRAC_PI_2, max_relative = 1e-12);
        assert_relative_eq!(a.beta(0, 1, 0), FRAC_PI_2, max_relative = 1e-12);
        assert_relative_eq!(a.beta(0, 1, 1), FRAC_PI_2, max_relative = 1e-12);
    }

    #[test]
    fn isoceles_right_construction() {
        let cfg = HeadingConfig::new(vec![[FRAC_PI_4, FRAC_PI_4], [-0.3, -0.2]], 1.0).unwrap();
        let s = positions_from_headings(&cfg, 2.0).unwrap();
        assert_relative_eq!(s.sensors()[0].x, 1.0, max_relative = 1e-14);
        assert_relative_eq!(s.sensors()[0].y, -1.0, max_relative = 1e-14);
    }

    #[test]
    fn ray_through_target_degenerate_at_exact_zero() {
        let gamma = 0.6f64;
        let a = gamma.asin();
        // One zero heading intersects exactly at a target: rejected.
        let cfg = HeadingConfig::new(vec![[a, 0.0], [0.1, 0.1]], gamma).unwrap();
        assert!(matches!(
            positions_from_headings(&cfg, 1.0),
            Err(Error::DegenerateGeometry(_))
        ));
        // Nudged off zero it is accepted.
        let cfg = HeadingConfig::new(vec![[a - 1e-6, 1e-6], [0.1, 0.1]], gamma).unwrap();
        let s = positions_from_headings(&cfg, 1.0).unwrap();
        assert_eq!(s.num_sensors(), 2);
    }

    #[test]
    fn both_zero_headings_rejected() {
        let cfg = HeadingConfig::new(vec![[0.0, 0.0], [0.1, 0.1]], 0.5).unwrap();
        assert!(matches!(
            positions_from_headings(&cfg, 1.0),
            Err(Error::DegenerateGeometry(_))
        ));
    }

    #[test]
    fn beta_from_headings_direct_substitution() {
        let cfg = HeadingConfig::new(vec![[0.3, 0.2], [0.1, 0.1]], 0.5).unwrap();
        let pa = headings_to_pair_angles(&cfg);
        assert_relative_eq!(pa.beta[0], PI - 0.5, max_relative = 1e-15);
    }

    #[test]
    fn theta_from_headings_difference() {
        let a = 0.4f64;
        let cfg = HeadingConfig::new(vec![[a, 0.0], [-a, 0.0]], a.sin()).unwrap();
        let pa = headings_to_pair_angles(&cfg);
        assert_relative_eq!(pa.theta[0][0], 2.0 * a, max_relative = 1e-15);
        assert_relative_eq!(pa.theta[0][1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_row_pattern_theta_multiset() {
        // Rows of the four-sensor boundary pattern; target-1 headings are
        // (-a, 0, a, 0) so the pair differences are {a, 2a, a, a, 0, a}.
        let gamma = 0.6f64;
        let a = gamma.asin();
        let cfg = HeadingConfig::new(
            vec![[-a, 0.0], [0.0, -a], [a, 0.0], [0.0, a]],
            gamma,
        )
        .unwrap();
        let pa = headings_to_pair_angles(&cfg);
        let t1: Vec<f64> = pa.theta.iter().map(|t| t[0]).collect();
        let expect = [a, 2.0 * a, a, a, 0.0, a];
        for (got, want) in t1.iter().zip(expect.iter()) {
            assert_relative_eq!(got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn scenario_rejects_sensor_on_target() {
        let err = Scenario::new(
            vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)],
            vec![Point::new(0.0, 0.0), Point::new(0.5, 1.0)],
            1.0,
        );
        assert!(matches!(err, Err(Error::DegenerateGeometry(_))));
    }

    #[test]
    fn scenario_json_round_trip() {
        let s = Scenario::new(
            vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0)],
            vec![Point::new(0.5, -0.25), Point::new(1.5, 0.75)],
            0.7,
        )
        .unwrap();
        let js = serde_json::to_string(&s).unwrap();
        assert!(js.contains("\"targets\""));
        let back: Scenario = serde_json::from_str(&js).unwrap();
        assert_eq!(back.sensors()[1].y, 0.75);
        assert_eq!(back.sigma(), 0.7);
    }

    #[test]
    fn heading_config_rejects_opposite_signs() {
        assert!(HeadingConfig::new(vec![[0.2, -0.2]], 0.9).is_err());
    }

    #[test]
    fn heading_config_rejects_leakage_violation() {
        let gamma = 0.5f64;
        let a = gamma.asin();
        assert!(HeadingConfig::new(vec![[a, a]], gamma).is_err());
    }
}
