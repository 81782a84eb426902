//! Simulation and verification toolkit for Brownian last passage percolation
//! line ensembles, Dyson Brownian motion, mutually avoiding Brownian bridges
//! and the jump ensemble built on top of them.
//!
//! Module map:
//!
//! * [`stochastic`] grids, sampled paths, RNG streams, Brownian motion and bridges,
//!   closed-form Gaussian helpers.
//! * [`lpp`] path energies, maximal ℓ-tuple energies by dynamic programming,
//!   the line ensemble `L_n` and its KPZ scaling.
//! * [`rmt`] GUE matrices, Hermitian Brownian motion and its eigenvalue process.
//! * [`bridges`] avoidance events, Karlin–McGregor determinants, rejection and
//!   Gibbs resampling, sup-crossing formulas.
//! * [`jump`] constants, concave majorant, pole set and tent map, corner vectors,
//!   reconstruction, Wiener candidate and jump-ensemble sampling.
//! * [`mclab`] estimators, exponent fits, tail and regularity checks, closed-form
//!   bounds, CSV output and the experiment drivers used by the CLI.

// `!(x > 0.0)` style guards reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bridges;
pub mod error;
pub mod jump;
pub mod lpp;
pub mod mclab;
pub mod rmt;
pub mod stochastic;

pub use error::{Error, Result};
pub use stochastic::{GaussianLaw, RngStream, SampledPath, TimeGrid};
pub use lpp::{BrownianField, DisjointTuple, LppLineEnsemble, ScaledEnsemble, UprightPath};
pub use rmt::{EigenProcess, HermitianMatrix};
pub use bridges::{BridgeEnsembleSpec, CrossingCorrection, DecreasingList, FloorCurve};
pub use jump::{ConcaveMajorant, CornerVectors, JumpContext, JumpFrame, RegularityConstants, TestOutcome};
pub use mclab::{Config, CsvRow, EstimateReport, ExponentFit};
