//! Semi-discrete Brownian last passage percolation.
//!
//! Lines are indexed from 0 (line 1 in the usual one-based numbering is index 0), and so are
//! ensemble curves: curve 0 is the top curve.

mod dp;
mod ensemble;
mod field;

pub use dp::{max_energy, max_energy_profile};
pub use ensemble::{
    line_ensemble, near_geod_deficit, scale, scale_value, LppLineEnsemble, ScaledEnsemble,
};
pub use field::{energy, tuple_energy, BrownianField, DisjointTuple, UprightPath};
