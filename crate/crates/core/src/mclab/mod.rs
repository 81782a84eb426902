//! Monte Carlo laboratory.
//!
//! Estimators with standard errors, exponent and tail-decay fits, KS
//! distances, closed-form bounds, regularity and bridge-comparison checks,
//! and one driver per experiment. A driver reads a [`Config`] and returns
//! [`CsvRow`]s; the same seed and config give byte-identical CSV.
//!
//! Trial `i` of an estimate always runs on stream `stream_id(tag, i)`, so
//! results do not depend on the number of worker threads.

mod bounds;
mod estimate;
pub mod experiments;
mod geometry;
mod io;
mod tails;

pub use bounds::{named_bound, BOUND_NAMES};
pub use estimate::{
    estimate_tail, fit_exponent, fit_power_law, fit_tail_decay, ks_one_sample, ks_threshold, ks_two_sample, ols,
    run_trials, tail_reports, EstimateReport, ExponentFit, LineFit, Tail, MIN_HITS,
};
pub use geometry::{modulus_of_continuity, parabola_q, parabolic_shift, tangent_l};
pub use io::{fmt_f64, render_csv, write_csv, Config, CsvRow, CSV_HEADER};
pub use tails::{
    bridge_compare_tail, cell_exceedance, check_regularity, BridgeComparison, RegularityParams, RegularityPoint,
    RegularityReport,
};
