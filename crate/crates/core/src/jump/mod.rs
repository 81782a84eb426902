//! The jump ensemble.
//!
//! A [`JumpFrame`] fixes `k`, `ε`, `d_ip`, the window `T = D_k (log 1/ε)^{1/3}`
//! and a grid on `[-2T, 2T]`. A [`JumpContext`] adds the data the resampling
//! conditions on: the floor (curve `k+1`), boundary values at `±2T` and the
//! standardized side curves on `[-2T, 𝔩]` and `[𝔯, 2T]`. From the floor it
//! derives the concave majorant on `[-T, T]`, the pair `(𝔩, 𝔯)`, the pole set,
//! the tent map and the corner vectors.
//!
//! Extreme points of the majorant are its hull vertices on the grid.

mod constants;
mod context;
mod majorant;
mod poles;

pub use constants::{little_c_ratio, regularity_constants, RegularityConstants};
pub use context::{
    check_fav, corner_admissible, side_bridges, CornerVectors, EpsilonPolicy, JumpContext, JumpFrame, JumpSample,
    SideData, TestOutcome,
};
pub use majorant::{least_concave_majorant, select_lr, ConcaveMajorant, LrSelection};
pub use poles::{build_pole_set, select_poles, PoleSet, TentMap};
