//! Shared helpers for the integration suites: seeded random scenarios and
//! independent closed-form oracles that must not reuse library code paths.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stealth_place::geometry::{positions_from_headings, HeadingConfig, Point, Scenario};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random scenario with points in `[-5, 5]^2`; retries until the
/// coincidence invariant holds.
pub fn random_scenario(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Scenario {
    loop {
        let pt = |rng: &mut ChaCha8Rng| Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let targets: Vec<Point> = (0..n).map(|_| pt(rng)).collect();
        let sensors: Vec<Point> = (0..m).map(|_| pt(rng)).collect();
        let sigma = rng.gen_range(0.5..2.0);
        if let Ok(s) = Scenario::new(targets, sensors, sigma) {
            return s;
        }
    }
}

/// Independent oracle for the two-target stealth region: a point is
/// feasible iff it lies in both, or in neither, of the two discs of
/// diameter `d / gamma` whose boundaries pass through both targets.
pub fn two_circle_feasible(p: Point, t1: Point, t2: Point, gamma: f64) -> bool {
    let d = t1.dist(t2);
    let tol = 1e-9 * d;
    if p.dist(t1) <= tol || p.dist(t2) <= tol {
        return false;
    }
    let r = 0.5 * d / gamma;
    let h = (r * r - 0.25 * d * d).max(0.0).sqrt();
    let mid = Point::new(0.5 * (t1.x + t2.x), 0.5 * (t1.y + t2.y));
    let ux = (t2.x - t1.x) / d;
    let uy = (t2.y - t1.y) / d;
    let c_plus = Point::new(mid.x - uy * h, mid.y + ux * h);
    let c_minus = Point::new(mid.x + uy * h, mid.y - ux * h);
    let in_plus = p.dist(c_plus) <= r;
    let in_minus = p.dist(c_minus) <= r;
    in_plus == in_minus
}

/// Realizes a heading configuration whose rows may touch the targets by
/// sliding boundary rows with a zero heading a distance `eps` along the
/// arc, keeping the row sum (and so the leakage) unchanged.
pub fn realize_with_eps(cfg: &HeadingConfig, d: f64, eps: f64) -> Scenario {
    let rows: Vec<[f64; 2]> = cfg
        .alpha()
        .iter()
        .map(|r| {
            let sign = if r[0] + r[1] != 0.0 { (r[0] + r[1]).signum() } else { 1.0 };
            if r[0] == 0.0 && r[1] != 0.0 {
                [sign * eps, r[1] - sign * eps]
            } else if r[1] == 0.0 && r[0] != 0.0 {
                [r[0] - sign * eps, sign * eps]
            } else {
                *r
            }
        })
        .collect();
    let nudged = HeadingConfig::new(rows, cfg.gamma()).expect("nudged rows stay feasible");
    positions_from_headings(&nudged, d).expect("nudged rows realize")
}
