use crate::error::{invalid, Result};

/// Uniform grid `a = t_0 < t_1 < ... < t_steps ≈ b` with `t_i = a + i·h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    a: f64,
    b: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(a: f64, b: f64, steps: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return invalid(format!("grid endpoints must be finite, got [{a}, {b}]"));
        }
        if a >= b {
            return invalid(format!("grid needs a < b, got [{a}, {b}]"));
        }
        if steps == 0 {
            return invalid("grid needs at least one step");
        }
        Ok(Self { a, b, steps })
    }

    /// Grid on `[a, b]` with spacing as close as possible to (and not above) `h`.
    pub fn with_spacing(a: f64, b: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return invalid(format!("spacing must be positive, got {h}"));
        }
        let steps = ((b - a) / h - 1e-9).ceil().max(1.0) as usize;
        Self::new(a, b, steps)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.steps as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        self.a + i as f64 * self.h()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(move |i| self.time(i))
    }

    /// Index of the gridpoint at `t`, if `t` sits on the grid up to `1e-9·h`.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let u = (t - self.a) / self.h();
        let i = u.round();
        if i < 0.0 || i > self.steps as f64 || (u - i).abs() > 1e-9 {
            return None;
        }
        Some(i as usize)
    }

    /// Index of the last gridpoint at or before `t` (clamped to the grid).
    pub fn floor_index(&self, t: f64) -> usize {
        let u = ((t - self.a) / self.h() + 1e-12).floor();
        u.clamp(0.0, self.steps as f64) as usize
    }

    /// Grids agree when endpoints match to rounding and step counts are equal.
    pub fn matches(&self, other: &TimeGrid) -> bool {
        let tol = 1e-9 * self.h();
        self.steps == other.steps
            && (self.a - other.a).abs() <= tol
            && (self.b - other.b).abs() <= tol
    }

    /// The grid restricted to indices `i0..=i1`.
    pub fn sub(&self, i0: usize, i1: usize) -> Result<TimeGrid> {
        if i0 >= i1 || i1 > self.steps {
            return invalid(format!("bad sub-grid range {i0}..={i1} of {}", self.steps));
        }
        let b = if i1 == self.steps { self.b } else { self.time(i1) };
        TimeGrid::new(self.time(i0), b, i1 - i0)
    }
}
