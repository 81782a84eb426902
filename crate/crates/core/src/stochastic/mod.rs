//! Shared stochastic plumbing: time grids, piecewise-linear sampled paths,
//! reproducible RNG streams, Brownian motion and bridges, Gaussian helpers.

mod brownian;
mod gaussian;
mod grid;
mod path;
mod rng;

pub use brownian::{affine_to_standard, sample_brownian_bridge, sample_brownian_motion};
pub use gaussian::{
    bridge_fdd_density, gaussian_density, gaussian_tail_bounds, pinned_conditional_gaussian,
    GaussianLaw, PinnedQuery, TailBounds,
};
pub use grid::TimeGrid;
pub use path::SampledPath;
pub use rng::{stream_id, RngStream};
