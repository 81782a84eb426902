use super::TimeGrid;
use crate::error::{invalid, Error, Result};

/// Values on a [`TimeGrid`], read as their piecewise-linear interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl SampledPath {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return invalid(format!(
                "path has {} values for a grid of {} points",
                values.len(),
                grid.len()
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return invalid(format!("non-finite path value at index {i}"));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_parts_unchecked(grid: TimeGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn constant(grid: TimeGrid, c: f64) -> Self {
        Self { grid, values: vec![c; grid.len()] }
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.times().map(f).collect())
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Linear interpolation at `t ∈ [a, b]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let (a, b) = (self.grid.a(), self.grid.b());
        let tol = 1e-9 * self.grid.h();
        if !(t >= a - tol && t <= b + tol) {
            return Err(Error::InvalidInput(format!("t = {t} outside [{a}, {b}]")));
        }
        if let Some(i) = self.grid.index_of(t) {
            return Ok(self.values[i]);
        }
        let i = self.grid.floor_index(t).min(self.grid.steps() - 1);
        let w = (t - self.grid.time(i)) / self.grid.h();
        Ok((1.0 - w) * self.values[i] + w * self.values[i + 1])
    }

    /// Restriction to gridpoints `i0..=i1`.
    pub fn slice(&self, i0: usize, i1: usize) -> Result<SampledPath> {
        let grid = self.grid.sub(i0, i1)?;
        Ok(Self { grid, values: self.values[i0..=i1].to_vec() })
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> SampledPath {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn shifted(&self, c: f64) -> SampledPath {
        self.map(|v| v + c)
    }
}
