use std::f64::consts::{PI, SQRT_2};

use crate::error::{invalid, Result};

/// Normal law `ν_{m,σ²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianLaw {
    pub mean: f64,
    pub var: f64,
}

impl GaussianLaw {
    pub fn new(mean: f64, var: f64) -> Result<Self> {
        if !(var >= 0.0) || !mean.is_finite() || !var.is_finite() {
            return invalid(format!("bad normal law N({mean}, {var})"));
        }
        Ok(Self { mean, var })
    }

    pub fn sd(&self) -> f64 {
        self.var.sqrt()
    }

    pub fn density(&self, x: f64) -> f64 {
        gaussian_density(self.mean, self.var, x)
    }

    /// `ν(s, ∞)`.
    pub fn tail(&self, s: f64) -> f64 {
        if self.var == 0.0 {
            return if s < self.mean { 1.0 } else { 0.0 };
        }
        0.5 * libm::erfc((s - self.mean) / (self.sd() * SQRT_2))
    }

    pub fn cdf(&self, s: f64) -> f64 {
        if self.var == 0.0 {
            return if s >= self.mean { 1.0 } else { 0.0 };
        }
        0.5 * libm::erfc(-(s - self.mean) / (self.sd() * SQRT_2))
    }

    /// `ν(s + r, ∞) / ν(s, ∞)`; strictly decreasing in `s` for `r > 0`.
    pub fn tail_ratio(&self, s: f64, r: f64) -> f64 {
        self.tail(s + r) / self.tail(s)
    }
}

/// Density `g_{m,σ²}(x)`.
pub fn gaussian_density(m: f64, var: f64, x: f64) -> f64 {
    let d = x - m;
    (-d * d / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

/// Mills-ratio bracket on the standard normal tail at `t` standard deviations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBounds {
    /// Present only when `t ≥ 1`.
    pub lower: Option<f64>,
    pub upper: f64,
}

pub fn gaussian_tail_bounds(t: f64) -> Result<TailBounds> {
    if !(t >= 0.0) {
        return invalid(format!("tail bounds need t ≥ 0, got {t}"));
    }
    let base = (-t * t / 2.0).exp() / (2.0 * PI).sqrt();
    let upper = if t == 0.0 { f64::INFINITY } else { base / t };
    let lower = (t >= 1.0).then(|| base / (2.0 * t));
    Ok(TailBounds { lower, upper })
}

/// Data for the conditional law of `B(k, a)` under k independent bridges on
/// `[ℓ1, ℓ2]` from `start` to `end`, given `B(·, b) − B(·, a) = jump` and, when
/// `k ≥ 2`, the gaps `B(i, a) − B(i+1, a) = gaps_i − gaps_{i+1}`.
#[derive(Debug, Clone, Copy)]
pub struct PinnedQuery<'a> {
    pub l1: f64,
    pub a: f64,
    pub b: f64,
    pub l2: f64,
    pub start: &'a [f64],
    pub end: &'a [f64],
    pub jump: &'a [f64],
    pub gaps: Option<&'a [f64]>,
}

fn mean_of(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn pinned_conditional_gaussian(q: &PinnedQuery<'_>) -> Result<GaussianLaw> {
    let k = q.start.len();
    if k == 0 || q.end.len() != k || q.jump.len() != k {
        return invalid("start, end and jump must share a positive length");
    }
    if !(q.l1 < q.a && q.a <= q.b && q.b < q.l2) {
        return invalid(format!(
            "need l1 < a <= b < l2, got ({}, {}, {}, {})",
            q.l1, q.a, q.b, q.l2
        ));
    }
    let left = q.a - q.l1;
    let right = q.l2 - q.b;
    let span = left + right;
    let gap_term = match q.gaps {
        Some(r) if r.len() == k => r[k - 1] - mean_of(r),
        Some(_) => return invalid("gap vector length differs from k"),
        None if k == 1 => 0.0,
        None => return invalid("gap vector required when k ≥ 2"),
    };
    let zj = mean_of(q.end) - mean_of(q.jump);
    let mean = gap_term + left / span * zj + right / span * mean_of(q.start);
    let precision = k as f64 * (1.0 / left + 1.0 / right);
    GaussianLaw::new(mean, 1.0 / precision)
}

/// Joint density at `(times, values)` of a Brownian bridge from `x` at `a` to `y` at `b`.
pub fn bridge_fdd_density(
    (x, y): (f64, f64),
    (a, b): (f64, f64),
    times: &[f64],
    values: &[f64],
) -> Result<f64> {
    if times.len() != values.len() {
        return invalid("times and values differ in length");
    }
    if !(a < b) {
        return invalid(format!("interval [{a}, {b}] is empty"));
    }
    let mut prev_t = a;
    let mut prev_z = x;
    let mut dens = 1.0;
    for (&t, &z) in times.iter().zip(values) {
        if !(t > prev_t && t < b) {
            return invalid("times must be strictly increasing inside (a, b)");
        }
        dens *= gaussian_density(0.0, t - prev_t, z - prev_z);
        prev_t = t;
        prev_z = z;
    }
    if times.is_empty() {
        return Ok(1.0);
    }
    dens *= gaussian_density(0.0, b - prev_t, y - prev_z);
    Ok(dens / gaussian_density(0.0, b - a, y - x))
}
