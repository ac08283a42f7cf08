// Scratch probe for pinning regression values; not part of the deliverable.
use std::time::Instant;

use stealth_place::analytic2x2::{oracle_2x2, Oracle2x2Mode};
use stealth_place::bounds::best_bounds;
use stealth_place::fim::{stealth_region_raster, Rect};
use stealth_place::geometry::Point;
use stealth_place::oracle::{grid_search_headings, GridSearchOptions, SignPatterns};
use stealth_place::solver::{solve, Method, SolveOptions};

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();

    if which.is_empty() || which == "raster" {
        // n = 4 square of targets, Fig-8-style sweep.
        let targets = [
            Point::new(-1.0, -1.0),
            Point::new(1.0, -1.0),
            Point::new(1.0, 1.0),
            Point::new(-1.0, 1.0),
        ];
        let bounds = Rect::new(Point::new(-3.1, -3.1), Point::new(3.1, 3.1)).unwrap();
        for g in [0.3, 0.6, 0.9] {
            let t = Instant::now();
            let raster = stealth_region_raster(&targets, g, bounds, 512).unwrap();
            println!(
                "raster n=4 gamma={g}: components={} feasible={} time={:?}",
                raster.connected_components(),
                raster.feasible_count(),
                t.elapsed()
            );
        }
    }

    if which.is_empty() || which == "oracle2x2" {
        let t1 = Point::new(0.0, 0.0);
        let t2 = Point::new(1.0, 0.0);
        for g in [0.3, 0.5, 0.7, 0.9] {
            for (mode, name) in [
                (Oracle2x2Mode::Unconstrained, "unconstrained"),
                (Oracle2x2Mode::BothBetween, "both-between"),
            ] {
                let t = Instant::now();
                let best = oracle_2x2(t1, t2, g, mode, 201).unwrap();
                println!("oracle2x2 g={g} {name}: best={best:.12} time={:?}", t.elapsed());
            }
        }
    }

    if which.is_empty() || which == "headings" {
        let t = Instant::now();
        let res = grid_search_headings(
            3,
            0.6,
            &GridSearchOptions {
                resolution: 41,
                sign_patterns: SignPatterns::Symmetric,
                ..Default::default()
            },
        )
        .unwrap();
        println!(
            "heading oracle m=3 g=0.6 r41: best={:.12} evals={} time={:?} alpha={:?}",
            res.best_eta2,
            res.evaluations,
            t.elapsed(),
            res.best_alpha.alpha()
        );
    }

    if which.is_empty() || which == "traps" {
        for seed in [0u64, 7, 42] {
            let mut trapped = 0;
            let mut worst: (f64, usize, f64) = (0.0, 0, 0.0);
            for m in 2..=9usize {
                for gi in 1..=4 {
                    let g = 0.2 * gi as f64;
                    let opts = SolveOptions {
                        starts: 1,
                        warm_starts: false,
                        seed,
                        max_iters: 1500,
                        method: Method::PenaltyGradient,
                        ..Default::default()
                    };
                    let res = solve(m, g, &opts).unwrap();
                    let lb = best_bounds(m, g).unwrap().best_lb;
                    let deficit = lb - res.eta2;
                    if deficit > 1e-3 {
                        trapped += 1;
                        if deficit > worst.0 {
                            worst = (deficit, m, g);
                        }
                    }
                }
            }
            println!(
                "seed {seed}: trapped {trapped}/32 cold starts; worst deficit {:.4} at m={} g={}",
                worst.0, worst.1, worst.2
            );
        }
    }

    if which.is_empty() || which == "sweep" {
        let t = Instant::now();
        for m in 2..=9usize {
            for gi in 1..=4 {
                let g = 0.2 * gi as f64;
                let opts = SolveOptions { starts: 4, max_iters: 1200, seed: 11, ..Default::default() };
                let res = solve(m, g, &opts).unwrap();
                let rep = best_bounds(m, g).unwrap();
                assert!(res.eta2 >= rep.best_lb - 1e-6 && res.eta2 <= rep.best_ub + 1e-6);
                let gain = res.eta2 - rep.best_lb;
                if gain > 1e-6 {
                    println!("  solver beats lb at m={m} g={g}: +{gain:.6}");
                }
            }
        }
        println!("warm sweep OK in {:?}", t.elapsed());
    }
}
