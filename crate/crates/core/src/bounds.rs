//! Analytic lower and upper bounds on the optimal min-max objective for `m`
//! sensors against two targets at leakage level `gamma`.
//!
//! Lower bounds come from two explicit feasible heading configurations
//! (`degenerate_config`, `uniform_config`) whose pair sums evaluate in
//! closed form. Upper bounds come from a per-side pair-count argument
//! (`constraint_upper_bound`) and from a concave envelope of `sin^2`
//! (`jensen_upper_bound`). All values are the dimensionless squared
//! objective; divide by `m^2` to normalize.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::HeadingConfig;

/// Slope of the linear piece of the `sin^2` concave envelope.
pub const G_SLOPE: f64 = 0.724611;
/// Abscissa where the linear piece meets `sin^2` tangentially.
pub const G_BREAK: f64 = 1.16556;

fn check_m_gamma(m: usize, gamma: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidParameters(format!("need at least 2 sensors, got {m}")));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameters(format!("gamma must be in (0, 1], got {gamma}")));
    }
    Ok(gamma.asin())
}

/// Boundary configuration with sensors pushed against the targets: rows
/// cycle through `(-a, 0), (0, -a), (a, 0), (0, a)` with `a = asin(gamma)`.
/// For odd `m` the final sensor sits mid-arc, headings `(a/2, a/2)` signed
/// towards the side holding fewer sensors (ties go to the negative side).
/// Every row meets the leakage constraint with equality.
pub fn degenerate_config(m: usize, gamma: f64) -> Result<HeadingConfig> {
    let a = check_m_gamma(m, gamma)?;
    let base = [[-a, 0.0], [0.0, -a], [a, 0.0], [0.0, a]];
    let paired = if m % 2 == 0 { m } else { m - 1 };
    let mut rows: Vec<[f64; 2]> = (0..paired).map(|i| base[i % 4]).collect();
    if m % 2 == 1 {
        let neg = rows.iter().filter(|r| r[0] + r[1] < 0.0).count();
        let side = if paired - neg < neg { 1.0 } else { -1.0 };
        rows.push([side * 0.5 * a, side * 0.5 * a]);
    }
    HeadingConfig::new(rows, gamma)
}

/// Closed-form pair sum of `degenerate_config`, split by `m mod 4`.
pub fn degenerate_lower_bound(m: usize, gamma: f64) -> Result<f64> {
    check_m_gamma(m, gamma)?;
    let g2 = gamma * gamma;
    let mf = m as f64;
    let full_pairs = 0.25 * mf * mf * g2 * (2.0 - g2);
    let odd_pairs = |mf: f64| {
        0.25 * (mf - 1.0) * (2.0 - 2.0 * (1.0 - g2).powf(1.5) + (mf - 1.0) * g2 * (2.0 - g2))
    };
    Ok(match m % 4 {
        0 => full_pairs,
        1 => odd_pairs(mf),
        2 => full_pairs - g2 + g2 * g2,
        _ => odd_pairs(mf) - g2 + g2 * g2 + g2 * (1.0 - g2).sqrt(),
    })
}

/// Boundary configuration with equal arc spacing between neighbors: the
/// first-target headings form an arithmetic progression with step
/// `delta = 2 asin(gamma) / m`, offset half (even `m`) or a quarter (odd
/// `m`) step from the arc end so no sensor lands on a target or the
/// center-line. Every row meets the leakage constraint with equality.
pub fn uniform_config(m: usize, gamma: f64) -> Result<HeadingConfig> {
    let a = check_m_gamma(m, gamma)?;
    let delta = 2.0 * a / m as f64;
    let offset = if m % 2 == 0 { 0.5 * delta } else { 0.25 * delta };
    let rows = (0..m)
        .map(|i| {
            let a1 = -a + offset + i as f64 * delta;
            let a2 = if a1 < 0.0 { -a - a1 } else { a - a1 };
            [a1, a2]
        })
        .collect();
    HeadingConfig::new(rows, gamma)
}

/// Pair sum of the uniform configuration as an explicit sum of sines;
/// exact partner of the closed form below.
fn uniform_pair_sum(m: usize, delta: f64) -> f64 {
    (1..m)
        .map(|k| (m - k) as f64 * (k as f64 * delta).sin().powi(2))
        .sum()
}

/// Closed-form pair sum of `uniform_config`:
/// `(m^2 - 1 + cos(2 m delta) - m^2 cos(2 delta)) / (8 sin^2 delta)`.
/// Falls back to the explicit sum when `delta < 1e-6` to avoid 0/0.
pub fn uniform_lower_bound(m: usize, gamma: f64) -> Result<f64> {
    let a = check_m_gamma(m, gamma)?;
    let mf = m as f64;
    let delta = 2.0 * a / mf;
    if delta < 1e-6 {
        return Ok(uniform_pair_sum(m, delta));
    }
    let s = delta.sin();
    Ok((mf * mf - 1.0 + (2.0 * mf * delta).cos() - mf * mf * (2.0 * delta).cos())
        / (8.0 * s * s))
}

/// Large-`m` limit of the normalized uniform bound:
/// `eta^2 / m^2 -> 1/4 - sin^2(2a) / (16 a^2)` with `a = asin(gamma)`.
pub fn uniform_asymptote(gamma: f64) -> Result<f64> {
    let a = check_m_gamma(2, gamma)?;
    Ok(0.25 - (2.0 * a).sin().powi(2) / (16.0 * a * a))
}

/// Pair-count upper bound for a split with `p` sensors on one side of the
/// center-line: same-side pairs contribute at most `gamma^2` each, opposite
/// sides at most `sin^2(2 asin gamma)` (capped at 1). `p` may be fractional
/// so the continuous relaxation can be evaluated directly.
pub fn constraint_per_p_bound(m: usize, p: f64, gamma: f64) -> f64 {
    let mf = m as f64;
    let g2 = gamma * gamma;
    let cross = if gamma <= std::f64::consts::FRAC_1_SQRT_2 {
        4.0 * g2 * (1.0 - g2)
    } else {
        1.0
    };
    let same_pairs = 0.5 * (p * (p - 1.0) + (mf - p) * (mf - p - 1.0));
    // Cross-side pair count is p (m - p): each of the p sensors on one side
    // pairs with each of the m - p on the other.
    same_pairs * g2 + p * (mf - p) * cross
}

/// Best pair-count upper bound over integer side splits; the maximizer is
/// `floor(m/2)`. For even `m` this equals the two-branch closed form
/// `(1/4) m gamma^2 (m (5 - 4 gamma^2) - 2)` for `gamma <= 1/sqrt 2` and
/// `(1/4) m (m - 2 gamma^2 + m gamma^2)` above; for odd `m` the integer
/// split is strictly tighter than that relaxation (which corresponds to the
/// fractional split `p = m/2`).
pub fn constraint_upper_bound(m: usize, gamma: f64) -> Result<f64> {
    check_m_gamma(m, gamma)?;
    let mf = m as f64;
    let g2 = gamma * gamma;
    let low_gamma = gamma <= std::f64::consts::FRAC_1_SQRT_2;
    Ok(if m % 2 == 0 {
        if low_gamma {
            0.25 * mf * g2 * (mf * (5.0 - 4.0 * g2) - 2.0)
        } else {
            0.25 * mf * (mf - 2.0 * g2 + mf * g2)
        }
    } else if low_gamma {
        0.25 * ((mf - 1.0) * (mf - 1.0) * g2 + (mf * mf - 1.0) * 4.0 * g2 * (1.0 - g2))
    } else {
        0.25 * ((mf - 1.0) * (mf - 1.0) * g2 + mf * mf - 1.0)
    })
}

/// Piecewise concave non-decreasing envelope of `sin^2` on `[0, pi]`:
/// linear with slope `G_SLOPE` up to the tangency abscissa `G_BREAK`, then
/// `sin^2` itself, then constant 1 from `pi/2`.
pub fn g_envelope(theta: f64) -> Result<f64> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::DomainError(format!("g is defined on [0, pi], got {theta}")));
    }
    Ok(if theta <= G_BREAK {
        G_SLOPE * theta
    } else if theta < std::f64::consts::FRAC_PI_2 {
        theta.sin().powi(2)
    } else {
        1.0
    })
}

/// Envelope upper bound: `C(m,2) g(c_m asin gamma)` with mean-heading
/// coefficient `c_m = 3m / (4(m-1))` for even `m` and `3(m+1) / (4m)` for
/// odd `m`.
pub fn jensen_upper_bound(m: usize, gamma: f64) -> Result<f64> {
    let a = check_m_gamma(m, gamma)?;
    let mf = m as f64;
    let coeff = if m % 2 == 0 {
        3.0 * mf / (4.0 * (mf - 1.0))
    } else {
        3.0 * (mf + 1.0) / (4.0 * mf)
    };
    let arg = coeff * a;
    // coeff <= 3/2 and a <= pi/2, so the argument stays below pi.
    debug_assert!(arg <= std::f64::consts::PI);
    let pairs = 0.5 * mf * (mf - 1.0);
    Ok(pairs * g_envelope(arg.min(std::f64::consts::PI))?)
}

/// All four bounds for one `(m, gamma)` plus the best pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsReport {
    pub m: usize,
    pub gamma: f64,
    pub lb_degenerate: f64,
    pub lb_uniform: f64,
    pub ub_constraint: f64,
    pub ub_jensen: f64,
    pub best_lb: f64,
    pub best_ub: f64,
}

impl BoundsReport {
    /// Same report with every value divided by `m^2`.
    pub fn normalized(&self) -> BoundsReport {
        let s = 1.0 / (self.m as f64 * self.m as f64);
        BoundsReport {
            m: self.m,
            gamma: self.gamma,
            lb_degenerate: self.lb_degenerate * s,
            lb_uniform: self.lb_uniform * s,
            ub_constraint: self.ub_constraint * s,
            ub_jensen: self.ub_jensen * s,
            best_lb: self.best_lb * s,
            best_ub: self.best_ub * s,
        }
    }
}

/// CSV schema of a bound sweep: raw values then `eta^2 / m^2` normalized,
/// floats at 17 significant digits.
pub const SWEEP_CSV_HEADER: &str = "m,gamma,lb_degenerate,lb_uniform,ub_constraint,ub_jensen,\
best_lb,best_ub,lb_degenerate_norm,lb_uniform_norm,ub_constraint_norm,ub_jensen_norm,\
best_lb_norm,best_ub_norm";

/// Renders sweep rows in the documented CSV schema.
pub fn sweep_csv(reports: &[BoundsReport]) -> String {
    use crate::jsonfmt::fmt17;
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let n = r.normalized();
        let cols = [
            r.gamma,
            r.lb_degenerate,
            r.lb_uniform,
            r.ub_constraint,
            r.ub_jensen,
            r.best_lb,
            r.best_ub,
            n.lb_degenerate,
            n.lb_uniform,
            n.ub_constraint,
            n.ub_jensen,
            n.best_lb,
            n.best_ub,
        ];
        out.push_str(&r.m.to_string());
        for c in cols {
            out.push(',');
            out.push_str(&fmt17(c));
        }
        out.push('\n');
    }
    out
}

/// Assembles all four bounds; `best_lb <= best_ub` holds for every valid
/// input.
pub fn best_bounds(m: usize, gamma: f64) -> Result<BoundsReport> {
    let lb_degenerate = degenerate_lower_bound(m, gamma)?;
    let lb_uniform = uniform_lower_bound(m, gamma)?;
    let ub_constraint = constraint_upper_bound(m, gamma)?;
    let ub_jensen = jensen_upper_bound(m, gamma)?;
    let best_lb = lb_degenerate.max(lb_uniform);
    let best_ub = ub_constraint.min(ub_jensen);
    Ok(BoundsReport {
        m,
        gamma,
        lb_degenerate,
        lb_uniform,
        ub_constraint,
        ub_jensen,
        best_lb,
        best_ub,
    })
}
