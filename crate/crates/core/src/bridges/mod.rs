//! Mutually avoiding Brownian bridge ensembles.
//!
//! Avoidance is checked at gridpoints. With [`CrossingCorrection::On`] each
//! accepted ensemble is further thinned by the exact probability that no pair
//! of adjacent curves (or the bottom curve and the floor) meets inside a grid
//! cell, given the cell's endpoint values. For one curve against a floor and
//! for two curves this makes the event exact in distribution; for three or
//! more curves the per-pair factors are multiplied, which ignores the (small)
//! dependence between pairs sharing a curve within one cell.

mod avoid;
mod km;
mod sampler;
mod sup;

pub use avoid::{no_touch, no_touch_range, survival_log_weight};
pub use km::{km_avoidance, vandermonde_expansion, KmValue, VandermondeBracket};
pub use sampler::{gibbs_resample, sample_avoiding, sample_independent};
pub use sup::{cell_crossing_prob, kolmogorov_two_sided, sup_crossing_prob};

use crate::error::{invalid, Result};
use crate::stochastic::{SampledPath, TimeGrid};

/// Strictly (or, if built with [`DecreasingList::weak`], weakly) decreasing reals.
#[derive(Debug, Clone, PartialEq)]
pub struct DecreasingList(Vec<f64>);

impl DecreasingList {
    pub fn strict(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return invalid("decreasing list needs finite entries");
        }
        if values.windows(2).any(|w| !(w[0] > w[1])) {
            return invalid(format!("{values:?} is not strictly decreasing"));
        }
        Ok(Self(values))
    }

    pub fn weak(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return invalid("decreasing list needs finite entries");
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("{values:?} is not weakly decreasing"));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    pub fn last(&self) -> f64 {
        self.0[self.0.len() - 1]
    }
}

/// How a finite floor behaves between gridpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FloorRoughness {
    /// Deterministic and linear on each cell.
    Linear,
    /// An unresolved diffusion-one path between its gridpoint values, such as
    /// a lower curve of the same ensemble.
    Brownian,
}

/// Lower boundary condition.
#[derive(Debug, Clone, PartialEq)]
pub enum FloorCurve {
    NegInfinity,
    Curve { path: SampledPath, roughness: FloorRoughness },
}

impl FloorCurve {
    pub fn linear(path: SampledPath) -> Self {
        FloorCurve::Curve { path, roughness: FloorRoughness::Linear }
    }

    pub fn brownian(path: SampledPath) -> Self {
        FloorCurve::Curve { path, roughness: FloorRoughness::Brownian }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FloorCurve::Curve { .. })
    }

    pub fn value(&self, i: usize) -> f64 {
        match self {
            FloorCurve::NegInfinity => f64::NEG_INFINITY,
            FloorCurve::Curve { path, .. } => path.at(i),
        }
    }

    pub fn path(&self) -> Option<&SampledPath> {
        match self {
            FloorCurve::NegInfinity => None,
            FloorCurve::Curve { path, .. } => Some(path),
        }
    }

    /// Same floor shifted up by `c`.
    pub fn raised(&self, c: f64) -> Self {
        match self {
            FloorCurve::NegInfinity => FloorCurve::NegInfinity,
            FloorCurve::Curve { path, roughness } => {
                FloorCurve::Curve { path: path.shifted(c), roughness: *roughness }
            }
        }
    }
}

/// Whether sampled avoidance events are thinned by in-cell crossing probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CrossingCorrection {
    #[default]
    Off,
    On,
}

/// `k` bridges on `grid` from `entrance` to `exit`, conditioned to avoid each
/// other and the floor.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeEnsembleSpec {
    pub grid: TimeGrid,
    pub entrance: DecreasingList,
    pub exit: DecreasingList,
    pub floor: FloorCurve,
}

impl BridgeEnsembleSpec {
    pub fn new(
        grid: TimeGrid,
        entrance: DecreasingList,
        exit: DecreasingList,
        floor: FloorCurve,
    ) -> Result<Self> {
        if entrance.len() != exit.len() {
            return invalid("entrance and exit differ in length");
        }
        if let Some(f) = floor.path() {
            if !f.grid().matches(&grid) {
                return invalid("floor lives on a different grid");
            }
            if !(entrance.last() > f.first() && exit.last() > f.last()) {
                return invalid("boundary data must sit strictly above the floor");
            }
        }
        Ok(Self { grid, entrance, exit, floor })
    }

    /// Convenience: strict lists, floor at minus infinity.
    pub fn free(grid: TimeGrid, entrance: Vec<f64>, exit: Vec<f64>) -> Result<Self> {
        Self::new(
            grid,
            DecreasingList::strict(entrance)?,
            DecreasingList::strict(exit)?,
            FloorCurve::NegInfinity,
        )
    }

    pub fn k(&self) -> usize {
        self.entrance.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert!(DecreasingList::strict(vec![2.0, 1.0, 0.0]).is_ok());
        assert!(DecreasingList::strict(vec![2.0, 2.0]).is_err());
        assert!(DecreasingList::weak(vec![2.0, 2.0]).is_ok());
        assert!(DecreasingList::weak(vec![1.0, 2.0]).is_err());
        assert!(DecreasingList::strict(vec![]).is_err());
    }

    #[test]
    fn spec_checks_floor_precondition() {
        let g = TimeGrid::new(0.0, 1.0, 4).unwrap();
        let floor = FloorCurve::linear(SampledPath::constant(g, 0.0));
        let x = DecreasingList::strict(vec![2.0, 1.0]).unwrap();
        let low = DecreasingList::strict(vec![2.0, 0.0]).unwrap();
        assert!(BridgeEnsembleSpec::new(g, x.clone(), x.clone(), floor.clone()).is_ok());
        assert!(BridgeEnsembleSpec::new(g, x.clone(), low, floor).is_err());
        let other = TimeGrid::new(0.0, 1.0, 5).unwrap();
        let f2 = FloorCurve::linear(SampledPath::constant(other, 0.0));
        assert!(BridgeEnsembleSpec::new(g, x.clone(), x, f2).is_err());
    }
}
