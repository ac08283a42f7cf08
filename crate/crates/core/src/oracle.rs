//! Brute-force grid search over heading space for small sensor counts.
//! Independent of the local solver; used to validate the analytic bounds
//! and to generate regression values.
//!
//! Each row's heading pair is discretized on the integer lattice
//! `alpha = sign * (ix, iy) * step` with `step = asin(gamma) / (resolution - 1)`
//! and `ix + iy <= resolution - 1`, so every pairwise heading difference is
//! an integer multiple of `step` and `sin^2` reduces to a table lookup.
//! Nested refinements use resolutions `2^k + 1`, which keep coarse lattices
//! inside fine ones.
//!
//! Symmetry reduction: the objective is invariant under relabeling sensors
//! and under the global left/right mirror, so sign patterns are enumerated
//! by the count `q` of positive rows (negative block first) and, in
//! `Symmetric` mode, quotiented by `q <-> m - q`. Rows within a sign block
//! are constrained to non-decreasing cell order. Ties in the argmax go to
//! the lexicographically smallest index tuple.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::HeadingConfig;
use crate::jsonfmt;

/// Sign-pattern enumeration mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignPatterns {
    /// Every split `q = 0..=m` of rows into sides.
    All,
    /// Splits quotiented by the left/right mirror, `q = 0..=m/2`.
    Symmetric,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSearchOptions {
    pub resolution: usize,
    pub sign_patterns: SignPatterns,
    /// Upper bound on objective evaluations before starting.
    pub eval_cap: u64,
    /// Number of best cells to retain beyond the maximum.
    pub top_k: usize,
}

impl Default for GridSearchOptions {
    fn default() -> Self {
        GridSearchOptions {
            resolution: 65,
            sign_patterns: SignPatterns::Symmetric,
            eval_cap: 2_000_000_000,
            top_k: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopCell {
    pub eta2: f64,
    pub alpha: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best_eta2: f64,
    pub best_alpha: HeadingConfig,
    pub evaluations: u64,
    pub resolution: usize,
    pub sign_patterns: SignPatterns,
    pub patterns_searched: usize,
    pub top: Vec<TopCell>,
}

impl GridSearchResult {
    pub fn to_json(&self) -> String {
        jsonfmt::to_json_17(self)
    }

    /// CSV of the retained best cells, one row per cell, headings flattened.
    pub fn top_k_csv(&self) -> String {
        let m = self.best_alpha.num_sensors();
        let mut out = String::from("eta2");
        for i in 0..m {
            out.push_str(&format!(",alpha{i}_1,alpha{i}_2"));
        }
        out.push('\n');
        for cell in &self.top {
            out.push_str(&jsonfmt::fmt17(cell.eta2));
            for row in &cell.alpha {
                out.push_str(&format!(",{},{}", jsonfmt::fmt17(row[0]), jsonfmt::fmt17(row[1])));
            }
            out.push('\n');
        }
        out
    }
}

/// Signed lattice cell of one row: heading indices before scaling by step.
type Cell = (i32, i32);

fn multiset_count(cells: u128, len: u32) -> u128 {
    // C(cells + len - 1, len): non-decreasing tuples of `len` cells.
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..len as u128 {
        num = num.saturating_mul(cells + i);
        den *= i + 1;
    }
    num / den
}

struct TaskResult {
    best: f64,
    argmax: Vec<Cell>,
    leaves: u64,
    top: Vec<(f64, Vec<Cell>)>,
}

/// DFS over rows `1..m` given the first row, accumulating pair sums
/// incrementally through the lookup table.
struct Dfs<'a> {
    table: &'a [f64],
    cells: &'a [(i32, i32)],
    signs: &'a [i32],
    m: usize,
    top_k: usize,
    best: f64,
    argmax: Vec<Cell>,
    leaves: u64,
    top: Vec<(f64, Vec<Cell>)>,
    chosen: Vec<Cell>,
}

impl Dfs<'_> {
    fn run(&mut self, depth: usize, min_cell_idx: usize, s1: f64, s2: f64) {
        if depth == self.m {
            self.leaves += 1;
            let v = s1.min(s2);
            if v > self.best {
                self.best = v;
                self.argmax = self.chosen.clone();
            }
            if self.top_k > 0 {
                let worst = self.top.last().map(|t| t.0).unwrap_or(f64::NEG_INFINITY);
                if self.top.len() < self.top_k || v > worst {
                    let pos = self.top.partition_point(|t| t.0 >= v);
                    self.top.insert(pos, (v, self.chosen.clone()));
                    self.top.truncate(self.top_k);
                }
            }
            return;
        }
        // Rows in the same sign block stay in non-decreasing cell order.
        let start = if depth > 0 && self.signs[depth] == self.signs[depth - 1] {
            min_cell_idx
        } else {
            0
        };
        let sign = self.signs[depth];
        for ci in start..self.cells.len() {
            let (ix, iy) = self.cells[ci];
            let cell = (sign * ix, sign * iy);
            let (mut t1, mut t2) = (s1, s2);
            for prev in &self.chosen {
                t1 += self.table[(cell.0 - prev.0).unsigned_abs() as usize];
                t2 += self.table[(cell.1 - prev.1).unsigned_abs() as usize];
            }
            self.chosen.push(cell);
            self.run(depth + 1, ci, t1, t2);
            self.chosen.pop();
        }
    }
}

/// Exhaustive search over the heading lattice; returns the best objective,
/// its lexicographically smallest argmax and optionally the top cells.
pub fn grid_search_headings(
    m: usize,
    gamma: f64,
    opts: &GridSearchOptions,
) -> Result<GridSearchResult> {
    if !(2..=4).contains(&m) {
        return Err(Error::InvalidParameters(format!(
            "grid search supports 2 to 4 sensors, got {m}"
        )));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameters(format!("gamma must be in (0, 1], got {gamma}")));
    }
    if opts.resolution < 11 {
        return Err(Error::InvalidParameters(format!(
            "resolution must be at least 11, got {}",
            opts.resolution
        )));
    }
    let r = opts.resolution;
    let a = gamma.asin();
    let step = a / (r - 1) as f64;

    let mut cells: Vec<(i32, i32)> = Vec::with_capacity(r * (r + 1) / 2);
    for ix in 0..r as i32 {
        for iy in 0..(r as i32 - ix) {
            cells.push((ix, iy));
        }
    }
    let table: Vec<f64> = (0..2 * r - 1)
        .map(|t| (t as f64 * step).sin().powi(2))
        .collect();

    let q_max = match opts.sign_patterns {
        SignPatterns::All => m,
        SignPatterns::Symmetric => m / 2,
    };
    // Cost estimate before searching: product of per-block multiset counts.
    let t_cells = cells.len() as u128;
    let mut projected: u128 = 0;
    for q in 0..=q_max {
        projected = projected.saturating_add(
            multiset_count(t_cells, (m - q) as u32) * multiset_count(t_cells, q as u32),
        );
    }
    if projected > opts.eval_cap as u128 {
        return Err(Error::ResourceLimit(format!(
            "projected {projected} evaluations exceed the cap of {}",
            opts.eval_cap
        )));
    }

    // One task per (pattern, first-row cell); rayon-safe, merged in order.
    let mut tasks: Vec<(usize, usize)> = Vec::new();
    for q in 0..=q_max {
        for c0 in 0..cells.len() {
            tasks.push((q, c0));
        }
    }
    let results: Vec<TaskResult> = tasks
        .par_iter()
        .map(|&(q, c0)| {
            let signs: Vec<i32> = (0..m).map(|i| if i < m - q { -1 } else { 1 }).collect();
            let (ix, iy) = cells[c0];
            let first = (signs[0] * ix, signs[0] * iy);
            let mut dfs = Dfs {
                table: &table,
                cells: &cells,
                signs: &signs,
                m,
                top_k: opts.top_k,
                best: f64::NEG_INFINITY,
                argmax: Vec::new(),
                leaves: 0,
                top: Vec::new(),
                chosen: vec![first],
            };
            dfs.run(1, c0, 0.0, 0.0);
            TaskResult { best: dfs.best, argmax: dfs.argmax, leaves: dfs.leaves, top: dfs.top }
        })
        .collect();

    let mut best = f64::NEG_INFINITY;
    let mut argmax: Vec<Cell> = Vec::new();
    let mut evaluations = 0u64;
    let mut top: Vec<(f64, Vec<Cell>)> = Vec::new();
    for tr in results {
        evaluations += tr.leaves;
        if tr.best > best {
            best = tr.best;
            argmax = tr.argmax;
        }
        if opts.top_k > 0 {
            for (v, cfg) in tr.top {
                let worst = top.last().map(|t| t.0).unwrap_or(f64::NEG_INFINITY);
                if top.len() < opts.top_k || v > worst {
                    let pos = top.partition_point(|t| t.0 >= v);
                    top.insert(pos, (v, cfg));
                    top.truncate(opts.top_k);
                }
            }
        }
    }

    let to_rows = |cfg: &[Cell]| -> Vec<[f64; 2]> {
        cfg.iter()
            .map(|&(i1, i2)| [i1 as f64 * step, i2 as f64 * step])
            .collect()
    };
    let best_alpha = HeadingConfig::new(to_rows(&argmax), gamma)?;
    Ok(GridSearchResult {
        best_eta2: best,
        best_alpha,
        evaluations,
        resolution: r,
        sign_patterns: opts.sign_patterns,
        patterns_searched: q_max + 1,
        top: top
            .into_iter()
            .map(|(eta2, cfg)| TopCell { eta2, alpha: to_rows(&cfg) })
            .collect(),
    })
}
