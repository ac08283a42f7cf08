//! Multi-start local maximization of the min-of-two-pair-sums objective over
//! heading angles, subject to the per-row leakage and same-sign constraints.
//!
//! The default method ascends a softmin smoothing
//! `f_tau = -tau ln(exp(-S1/tau) + exp(-S2/tau))` with the smoothing
//! parameter annealed from 1e-1 down to 1e-4, projecting every iterate
//! exactly onto its row triangle `{sign x >= 0, sign y >= 0,
//! sign (x + y) <= asin gamma}`. Row orthants are fixed per start (sampled
//! with the initial point), which removes the non-smooth sign constraint
//! from the ascent. The epigraph variable of the problem statement is
//! eliminated; the smoothed minimum is maximized directly.
//!
//! The alternative method keeps the orthant projection but enforces the
//! leakage rows with an augmented Lagrangian instead of exact projection.
//!
//! Analytic warm starts (the degenerate and uniform boundary
//! configurations) are injected as candidate incumbents by default, so the
//! solver never reports less than the analytic lower bound.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{best_bounds, degenerate_config, uniform_config};
use crate::error::{Error, Result};
use crate::geometry::HeadingConfig;

/// Pair sums `S_k = sum_{i<j} sin^2(alpha[i][k] - alpha[j][k])` for both
/// targets.
pub fn pair_sums(alpha: &[[f64; 2]]) -> [f64; 2] {
    let mut s = [0.0f64; 2];
    for i in 0..alpha.len() {
        for j in (i + 1)..alpha.len() {
            for k in 0..2 {
                s[k] += (alpha[i][k] - alpha[j][k]).sin().powi(2);
            }
        }
    }
    s
}

/// Objective value of a heading matrix: the smaller of the two pair sums.
pub fn evaluate_eta2_rows(alpha: &[[f64; 2]]) -> f64 {
    let [s1, s2] = pair_sums(alpha);
    s1.min(s2)
}

/// Objective value of a heading configuration.
pub fn evaluate_eta2(cfg: &HeadingConfig) -> f64 {
    evaluate_eta2_rows(cfg.alpha())
}

/// Softmin-smoothed objective; approaches `min(S1, S2)` from below as
/// `tau -> 0`.
pub fn smoothed_objective(alpha: &[[f64; 2]], tau: f64) -> f64 {
    let [s1, s2] = pair_sums(alpha);
    let mn = s1.min(s2);
    mn - tau * (((mn - s1) / tau).exp() + ((mn - s2) / tau).exp()).ln()
}

/// Analytic gradient of `smoothed_objective` with respect to every heading.
pub fn smoothed_gradient(alpha: &[[f64; 2]], tau: f64) -> Vec<[f64; 2]> {
    let [s1, s2] = pair_sums(alpha);
    let mn = s1.min(s2);
    let (e1, e2) = (((mn - s1) / tau).exp(), ((mn - s2) / tau).exp());
    let w = [e1 / (e1 + e2), e2 / (e1 + e2)];
    let m = alpha.len();
    let mut grad = vec![[0.0f64; 2]; m];
    for k in 0..2 {
        for i in 0..m {
            let mut d = 0.0;
            for j in 0..m {
                if j != i {
                    d += (2.0 * (alpha[i][k] - alpha[j][k])).sin();
                }
            }
            grad[i][k] = w[k] * d;
        }
    }
    grad
}

/// Exact Euclidean projection of a row onto its orthant triangle
/// `{sign x >= 0, sign y >= 0, sign (x + y) <= cap}`.
pub fn project_row(x: f64, y: f64, sign: f64, cap: f64) -> [f64; 2] {
    // Reflect into the positive orthant, project, reflect back.
    let (px, py) = (sign * x, sign * y);
    let inside = px >= 0.0 && py >= 0.0 && px + py <= cap;
    if inside {
        return [x, y];
    }
    let clamp = |v: f64| v.clamp(0.0, cap);
    // Candidates: the two axis edges and the hypotenuse segment.
    let c1 = (clamp(px), 0.0);
    let c2 = (0.0, clamp(py));
    let t = 0.5 * (cap - px - py);
    let mut hx = px + t;
    let mut hy = py + t;
    if hx < 0.0 {
        hx = 0.0;
        hy = cap;
    } else if hy < 0.0 {
        hx = cap;
        hy = 0.0;
    }
    let c3 = (hx, hy);
    let d2 = |c: (f64, f64)| (c.0 - px).powi(2) + (c.1 - py).powi(2);
    let best = [c1, c2, c3]
        .into_iter()
        .min_by(|a, b| d2(*a).total_cmp(&d2(*b)))
        .unwrap();
    [sign * best.0, sign * best.1]
}

/// Worst violation of the leakage and same-sign row constraints.
pub fn feasibility_residual(alpha: &[[f64; 2]], cap: f64) -> f64 {
    alpha
        .iter()
        .map(|r| {
            let leak = ((r[0] + r[1]).abs() - cap).max(0.0);
            let sign = (-(r[0] * r[1])).max(0.0).sqrt();
            leak.max(sign)
        })
        .fold(0.0, f64::max)
}

/// Local optimization backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Softmin smoothing with exact projection onto the row triangles.
    PenaltyGradient,
    /// Softmin smoothing, orthant projection, leakage rows enforced by an
    /// augmented Lagrangian.
    AugmentedLagrangian,
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "penalty-gradient" => Ok(Method::PenaltyGradient),
            "augmented-lagrangian" => Ok(Method::AugmentedLagrangian),
            other => Err(format!("unknown method '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Random starts; analytic warm starts are extra.
    pub starts: usize,
    pub max_iters: usize,
    pub tol_feas: f64,
    pub tol_opt: f64,
    pub seed: u64,
    /// Inject the analytic configurations as candidate incumbents.
    pub warm_starts: bool,
    pub method: Method,
    /// Record per-start improvement trajectories.
    pub trace: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            starts: 16,
            max_iters: 5000,
            tol_feas: 1e-8,
            tol_opt: 1e-6,
            seed: 0,
            warm_starts: true,
            method: Method::PenaltyGradient,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartOrigin {
    Random(usize),
    WarmDegenerate,
    WarmUniform,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub eta2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StartRecord {
    pub origin: StartOrigin,
    /// Best feasible objective reached from this start.
    pub eta2: f64,
    pub feasibility_residual: f64,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TracePoint>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Certificate {
    pub best_lb: f64,
    pub best_ub: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveResult {
    pub best_alpha: HeadingConfig,
    pub eta2: f64,
    pub per_start: Vec<StartRecord>,
    pub certificate: Certificate,
    pub tol_opt: f64,
}

/// Gap report against the analytic certificate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CertifyReport {
    pub eta2: f64,
    pub best_lb: f64,
    pub best_ub: f64,
    /// `best_ub - eta2`; how much head-room the upper bound leaves.
    pub gap: f64,
    /// `eta2 - best_lb`; negative means the solver lost to the analytic
    /// configuration.
    pub excess: f64,
}

/// Annealing schedule for the softmin smoothing parameter.
const TAU_SCHEDULE: [f64; 7] = [1e-1, 3.162e-2, 1e-2, 3.162e-3, 1e-3, 3.162e-4, 1e-4];
/// Consecutive small relative improvements before a stage stops.
const STALL_LIMIT: usize = 25;
const STALL_REL: f64 = 1e-10;

struct LocalOutcome {
    rows: Vec<[f64; 2]>,
    eta2: f64,
    iterations: usize,
    trace: Option<Vec<TracePoint>>,
}

/// Projected softmin ascent from one starting matrix with fixed row signs.
fn ascend_projected(
    mut rows: Vec<[f64; 2]>,
    signs: &[f64],
    cap: f64,
    max_iters: usize,
    want_trace: bool,
) -> LocalOutcome {
    for (r, s) in rows.iter_mut().zip(signs) {
        *r = project_row(r[0], r[1], *s, cap);
    }
    let mut best_rows = rows.clone();
    let mut best = evaluate_eta2_rows(&rows);
    let mut trace = want_trace.then(|| vec![TracePoint { iteration: 0, eta2: best }]);
    let mut iters = 0usize;
    let mut step = 0.25;
    'stages: for &tau in &TAU_SCHEDULE {
        let mut f_prev = smoothed_objective(&rows, tau);
        let mut stall = 0usize;
        loop {
            if iters >= max_iters {
                break 'stages;
            }
            let grad = smoothed_gradient(&rows, tau);
            let mut accepted = false;
            let mut f_new = f_prev;
            for _ in 0..40 {
                let cand: Vec<[f64; 2]> = rows
                    .iter()
                    .zip(grad.iter().zip(signs))
                    .map(|(r, (g, s))| project_row(r[0] + step * g[0], r[1] + step * g[1], *s, cap))
                    .collect();
                let f_cand = smoothed_objective(&cand, tau);
                if f_cand > f_prev {
                    rows = cand;
                    f_new = f_cand;
                    step = (step * 1.3).min(10.0);
                    accepted = true;
                    break;
                }
                step *= 0.5;
                if step < 1e-14 {
                    break;
                }
            }
            iters += 1;
            if !accepted {
                step = 0.25;
                break; // next smoothing stage
            }
            let eta2 = evaluate_eta2_rows(&rows);
            if eta2 > best {
                best = eta2;
                best_rows = rows.clone();
                if let Some(t) = trace.as_mut() {
                    t.push(TracePoint { iteration: iters, eta2 });
                }
            }
            let rel = (f_new - f_prev) / f_new.abs().max(1.0);
            if rel < STALL_REL {
                stall += 1;
                if stall >= STALL_LIMIT {
                    break;
                }
            } else {
                stall = 0;
            }
            f_prev = f_new;
        }
    }
    LocalOutcome { rows: best_rows, eta2: best, iterations: iters, trace }
}

/// Augmented-Lagrangian ascent: orthant kept by clamping, leakage rows
/// relaxed with multipliers. Candidates are snapped onto the feasible
/// triangle before being scored, so the reported incumbent is feasible.
fn ascend_augmented(
    mut rows: Vec<[f64; 2]>,
    signs: &[f64],
    cap: f64,
    max_iters: usize,
    want_trace: bool,
) -> LocalOutcome {
    let m = rows.len();
    for (r, s) in rows.iter_mut().zip(signs) {
        // Start inside the orthant; leakage may be violated initially.
        let (x, y) = (s * r[0], s * r[1]);
        *r = [s * x.max(0.0), s * y.max(0.0)];
    }
    let snap = |rows: &[[f64; 2]]| -> Vec<[f64; 2]> {
        rows.iter()
            .zip(signs)
            .map(|(r, s)| project_row(r[0], r[1], *s, cap))
            .collect()
    };
    let mut lambda = vec![0.0f64; m];
    let mut rho = 10.0f64;
    let mut best_rows = snap(&rows);
    let mut best = evaluate_eta2_rows(&best_rows);
    let mut trace = want_trace.then(|| vec![TracePoint { iteration: 0, eta2: best }]);
    let mut iters = 0usize;
    let violation = |rows: &[[f64; 2]]| -> f64 {
        rows.iter()
            .zip(signs)
            .map(|(r, s)| (s * (r[0] + r[1]) - cap).max(0.0))
            .fold(0.0, f64::max)
    };
    let mut prev_viol = f64::INFINITY;
    'outer: for outer in 0..30 {
        let tau = TAU_SCHEDULE[outer.min(TAU_SCHEDULE.len() - 1)];
        let mut step = 0.1;
        let al = |rows: &[[f64; 2]]| -> f64 {
            let mut v = smoothed_objective(rows, tau);
            for (r, (s, l)) in rows.iter().zip(signs.iter().zip(&lambda)) {
                let c = s * (r[0] + r[1]) - cap;
                let t = (l + rho * c).max(0.0);
                v -= (t * t - l * l) / (2.0 * rho);
            }
            v
        };
        let mut f_prev = al(&rows);
        let mut stall = 0usize;
        loop {
            if iters >= max_iters {
                break 'outer;
            }
            let mut grad = smoothed_gradient(&rows, tau);
            for (i, (r, s)) in rows.iter().zip(signs).enumerate() {
                let c = s * (r[0] + r[1]) - cap;
                let t = (lambda[i] + rho * c).max(0.0);
                grad[i][0] -= t * s;
                grad[i][1] -= t * s;
            }
            let mut accepted = false;
            let mut f_new = f_prev;
            for _ in 0..40 {
                let cand: Vec<[f64; 2]> = rows
                    .iter()
                    .zip(grad.iter().zip(signs))
                    .map(|(r, (g, s))| {
                        let x = s * (r[0] + step * g[0]);
                        let y = s * (r[1] + step * g[1]);
                        [s * x.max(0.0), s * y.max(0.0)]
                    })
                    .collect();
                let f_cand = al(&cand);
                if f_cand > f_prev {
                    rows = cand;
                    f_new = f_cand;
                    step = (step * 1.3).min(10.0);
                    accepted = true;
                    break;
                }
                step *= 0.5;
                if step < 1e-14 {
                    break;
                }
            }
            iters += 1;
            let snapped = snap(&rows);
            let eta2 = evaluate_eta2_rows(&snapped);
            if eta2 > best {
                best = eta2;
                best_rows = snapped;
                if let Some(t) = trace.as_mut() {
                    t.push(TracePoint { iteration: iters, eta2 });
                }
            }
            if !accepted {
                break;
            }
            let rel = (f_new - f_prev) / f_new.abs().max(1.0);
            if rel < STALL_REL {
                stall += 1;
                if stall >= STALL_LIMIT {
                    break;
                }
            } else {
                stall = 0;
            }
            f_prev = f_new;
        }
        let viol = violation(&rows);
        for (i, (r, s)) in rows.iter().zip(signs).enumerate() {
            let c = s * (r[0] + r[1]) - cap;
            lambda[i] = (lambda[i] + rho * c).max(0.0);
        }
        if viol > 0.25 * prev_viol {
            rho *= 2.0;
        }
        prev_viol = viol;
        if viol < 1e-12 && outer >= TAU_SCHEDULE.len() {
            break;
        }
    }
    LocalOutcome { rows: best_rows, eta2: best, iterations: iters, trace }
}

fn run_start(
    rows: Vec<[f64; 2]>,
    cap: f64,
    opts: &SolveOptions,
    origin: StartOrigin,
) -> (StartRecord, Vec<[f64; 2]>) {
    let signs: Vec<f64> = rows
        .iter()
        .map(|r| {
            let s = r[0] + r[1];
            if s != 0.0 {
                s.signum()
            } else if r[0] != 0.0 {
                r[0].signum()
            } else {
                1.0
            }
        })
        .collect();
    let out = match opts.method {
        Method::PenaltyGradient => {
            ascend_projected(rows, &signs, cap, opts.max_iters, opts.trace)
        }
        Method::AugmentedLagrangian => {
            ascend_augmented(rows, &signs, cap, opts.max_iters, opts.trace)
        }
    };
    let record = StartRecord {
        origin,
        eta2: out.eta2,
        feasibility_residual: feasibility_residual(&out.rows, cap),
        iterations: out.iterations,
        trace: out.trace,
    };
    (record, out.rows)
}

/// Multi-start solve. Random starts draw every heading uniformly from
/// `[-asin gamma, asin gamma]` on independent seeded streams; warm starts
/// add the two analytic boundary configurations. Fixed seed and options
/// give bit-identical results.
pub fn solve(m: usize, gamma: f64, opts: &SolveOptions) -> Result<SolveResult> {
    if m < 2 {
        return Err(Error::InvalidParameters(format!("need at least 2 sensors, got {m}")));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameters(format!("gamma must be in (0, 1], got {gamma}")));
    }
    if opts.starts < 1 {
        return Err(Error::InvalidParameters("starts must be at least 1".into()));
    }
    if !(opts.tol_feas > 0.0 && opts.tol_opt > 0.0) {
        return Err(Error::InvalidParameters("tolerances must be positive".into()));
    }
    let cap = gamma.asin();
    let report = best_bounds(m, gamma)?;
    let certificate = Certificate { best_lb: report.best_lb, best_ub: report.best_ub };

    let mut starts: Vec<(StartOrigin, Vec<[f64; 2]>)> = Vec::new();
    for k in 0..opts.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(k as u64);
        let rows: Vec<[f64; 2]> = (0..m)
            .map(|_| [rng.gen_range(-cap..=cap), rng.gen_range(-cap..=cap)])
            .collect();
        starts.push((StartOrigin::Random(k), rows));
    }
    if opts.warm_starts {
        starts.push((
            StartOrigin::WarmDegenerate,
            degenerate_config(m, gamma)?.alpha().to_vec(),
        ));
        starts.push((
            StartOrigin::WarmUniform,
            uniform_config(m, gamma)?.alpha().to_vec(),
        ));
    }

    let outcomes: Vec<(StartRecord, Vec<[f64; 2]>)> = starts
        .into_iter()
        .map(|(origin, rows)| run_start(rows, cap, opts, origin))
        .collect();

    let mut best_idx = None;
    for (idx, (rec, _)) in outcomes.iter().enumerate() {
        if rec.feasibility_residual <= opts.tol_feas
            && best_idx.is_none_or(|b: usize| rec.eta2 > outcomes[b].0.eta2)
        {
            best_idx = Some(idx);
        }
    }
    let best_idx = best_idx.ok_or_else(|| {
        Error::NoFeasiblePoint("every start failed feasibility restoration".into())
    })?;
    let (best_rec, best_rows) = &outcomes[best_idx];
    let eta2 = best_rec.eta2;
    if opts.warm_starts {
        // Warm starts are evaluated directly, so the incumbent cannot fall
        // below the analytic lower bound.
        debug_assert!(eta2 >= certificate.best_lb - opts.tol_opt);
    }
    debug_assert!(eta2 <= certificate.best_ub + opts.tol_opt);
    let best_alpha = HeadingConfig::new(best_rows.clone(), gamma)?;
    Ok(SolveResult {
        best_alpha,
        eta2,
        per_start: outcomes.into_iter().map(|(rec, _)| rec).collect(),
        certificate,
        tol_opt: opts.tol_opt,
    })
}

/// Checks the incumbent against its certificate; an incumbent above the
/// upper bound means a bug somewhere and is reported as an error.
pub fn certify(result: &SolveResult) -> Result<CertifyReport> {
    let Certificate { best_lb, best_ub } = result.certificate;
    if result.eta2 > best_ub + result.tol_opt {
        return Err(Error::BoundViolation(format!(
            "eta2 = {} exceeds certified upper bound {}",
            result.eta2, best_ub
        )));
    }
    Ok(CertifyReport {
        eta2: result.eta2,
        best_lb,
        best_ub,
        gap: best_ub - result.eta2,
        excess: result.eta2 - best_lb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eta2_of_all_zero_headings_is_zero() {
        let cfg = HeadingConfig::new(vec![[0.0, 0.0]; 3], 0.5).unwrap();
        assert_eq!(evaluate_eta2(&cfg), 0.0);
    }

    #[test]
    fn eta2_matches_degenerate_bound_m2() {
        let cfg = degenerate_config(2, 0.7).unwrap();
        assert_relative_eq!(evaluate_eta2(&cfg), 0.49, max_relative = 1e-12);
    }

    #[test]
    fn projection_is_exact_on_triangle() {
        let cap = 1.0;
        // Interior point unchanged.
        assert_eq!(project_row(0.2, 0.3, 1.0, cap), [0.2, 0.3]);
        // Beyond the hypotenuse lands on it.
        let [x, y] = project_row(0.9, 0.9, 1.0, cap);
        assert_relative_eq!(x + y, cap, max_relative = 1e-15);
        assert_relative_eq!(x, 0.5, max_relative = 1e-12);
        // Negative quadrant snaps to the origin for positive sign.
        assert_eq!(project_row(-0.4, -0.2, 1.0, cap), [0.0, 0.0]);
        // Mirrored for negative sign.
        let [x, y] = project_row(-0.9, -0.9, -1.0, cap);
        assert_relative_eq!(x + y, -cap, max_relative = 1e-15);
        // Far corner clamps to a vertex.
        assert_eq!(project_row(2.0, -0.5, 1.0, cap), [1.0, 0.0]);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let alpha = vec![[0.3, 0.1], [-0.2, -0.4], [0.05, 0.3]];
        let tau = 1e-2;
        let grad = smoothed_gradient(&alpha, tau);
        let h = 1e-6;
        for i in 0..alpha.len() {
            for k in 0..2 {
                let mut plus = alpha.clone();
                plus[i][k] += h;
                let mut minus = alpha.clone();
                minus[i][k] -= h;
                let fd = (smoothed_objective(&plus, tau) - smoothed_objective(&minus, tau))
                    / (2.0 * h);
                assert!(
                    (grad[i][k] - fd).abs() <= 1e-5 * grad[i][k].abs().max(1.0),
                    "i={i} k={k}: analytic {} vs fd {fd}",
                    grad[i][k]
                );
            }
        }
    }

    #[test]
    fn warm_started_solve_reaches_known_optimum() {
        let opts = SolveOptions { starts: 4, max_iters: 1500, ..Default::default() };
        let res = solve(2, 0.6, &opts).unwrap();
        assert!(res.eta2 >= 0.36 - 1e-6, "eta2 = {}", res.eta2);
        assert!(res.eta2 <= res.certificate.best_ub + 1e-6);
        let rep = certify(&res).unwrap();
        assert!(rep.excess >= -1e-6);
    }

    #[test]
    fn augmented_lagrangian_reaches_known_optimum() {
        let opts = SolveOptions {
            starts: 4,
            max_iters: 2000,
            method: Method::AugmentedLagrangian,
            ..Default::default()
        };
        let res = solve(2, 0.6, &opts).unwrap();
        assert!(res.eta2 >= 0.36 - 1e-6, "eta2 = {}", res.eta2);
        assert!(feasibility_residual(res.best_alpha.alpha(), 0.6f64.asin()) <= 1e-8);
    }

    #[test]
    fn fixed_seed_is_bit_identical() {
        let opts = SolveOptions { starts: 3, max_iters: 400, trace: true, ..Default::default() };
        let a = solve(3, 0.5, &opts).unwrap();
        let b = solve(3, 0.5, &opts).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn certify_flags_corrupted_incumbent() {
        let opts = SolveOptions { starts: 1, max_iters: 200, ..Default::default() };
        let mut res = solve(2, 0.5, &opts).unwrap();
        res.eta2 = res.certificate.best_ub + 1.0;
        assert!(matches!(certify(&res), Err(Error::BoundViolation(_))));
    }
}
