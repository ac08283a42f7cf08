//! Stealthy placement of range-only sensors around targets that carry range
//! sensors of their own.
//!
//! The toolkit covers, for two-dimensional scenarios:
//! - D-optimality criteria (determinant of the range-measurement Fisher
//!   information) per target and per sensor, with a mutual-oracle identity
//!   between the pair-sum and assembled-matrix routes ([`fim`]);
//! - the complete two-sensor/two-target theory: feasibility case
//!   classification, constructive global optima for free and
//!   between-targets placement, verifiers and a positional grid oracle
//!   ([`analytic2x2`]);
//! - analytic lower and upper bounds for any sensor count against two
//!   targets, from explicit boundary configurations, pair-count arguments
//!   and a concave envelope ([`bounds`]);
//! - a deterministic multi-start local solver over heading angles with
//!   analytic warm starts and bound certificates ([`solver`]);
//! - brute-force heading-lattice search for small sensor counts
//!   ([`oracle`]);
//! - stealth-region rasters with component counts, PGM/SVG export, and
//!   figure-style SVG plots ([`svgplot`]).

pub mod analytic2x2;
pub mod bounds;
pub mod error;
pub mod fim;
pub mod geometry;
pub mod jsonfmt;
pub mod oracle;
pub mod solver;
pub mod svgplot;

pub use error::{Error, Result};
pub use geometry::{HeadingConfig, Point, QuadAngles, Scenario};

/// Caps the global thread pool, e.g. from the `STEALTH_PLACE_THREADS`
/// environment variable. Must run before the first parallel call; later
/// invocations are ignored.
pub fn set_max_threads(threads: Option<usize>) {
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
}
