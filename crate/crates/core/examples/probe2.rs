use stealth_place::bounds::best_bounds;
use stealth_place::solver::{solve, Method, SolveOptions};

fn main() {
    // Cold-only multi-start: how close does pure ascent get?
    for (m, g) in [(2usize, 0.6f64), (3, 0.6), (4, 0.4), (6, 0.8)] {
        let opts = SolveOptions {
            starts: 8,
            warm_starts: false,
            seed: 3,
            max_iters: 2000,
            ..Default::default()
        };
        let res = solve(m, g, &opts).unwrap();
        let lb = best_bounds(m, g).unwrap().best_lb;
        let iters: Vec<usize> = res.per_start.iter().map(|r| r.iterations).collect();
        let etas: Vec<String> = res.per_start.iter().map(|r| format!("{:.4}", r.eta2)).collect();
        println!(
            "m={m} g={g}: cold best = {:.6} vs lb {:.6} (deficit {:+.2e}); iters={iters:?} etas={etas:?}",
            res.eta2, lb, lb - res.eta2
        );
    }
    // AL method cold start.
    let opts = SolveOptions {
        starts: 8,
        warm_starts: false,
        seed: 3,
        method: Method::AugmentedLagrangian,
        max_iters: 2000,
        ..Default::default()
    };
    let res = solve(2, 0.6, &opts).unwrap();
    println!("AL cold m=2 g=0.6: best = {:.6} (lb 0.36), feas={:.2e}", res.eta2,
        res.per_start.iter().map(|r| r.feasibility_residual).fold(0.0f64, f64::max));
}
