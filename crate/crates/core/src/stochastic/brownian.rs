use super::{RngStream, SampledPath, TimeGrid};

/// Standard Brownian motion on `grid` started from `start`.
pub fn sample_brownian_motion(grid: TimeGrid, start: f64, rng: &mut RngStream) -> SampledPath {
    let sd = grid.h().sqrt();
    let mut values = Vec::with_capacity(grid.len());
    let mut v = start;
    values.push(v);
    for _ in 0..grid.steps() {
        v += sd * rng.normal();
        values.push(v);
    }
    SampledPath::from_parts_unchecked(grid, values)
}

/// Brownian bridge from `x` at `a` to `y` at `b`.
///
/// A motion `W` from 0 is pinned by `W(t) − w(t)·W(b)` with `w = (t−a)/(b−a)`,
/// which is exact in law at every gridpoint. Endpoints are written verbatim.
pub fn sample_brownian_bridge(grid: TimeGrid, x: f64, y: f64, rng: &mut RngStream) -> SampledPath {
    let mut values = sample_brownian_motion(grid, 0.0, rng).into_values();
    pin_in_place(&mut values, x, y);
    SampledPath::from_parts_unchecked(grid, values)
}

/// Turns a motion from 0 (in place) into a bridge from `x` to `y`.
pub(crate) fn pin_in_place(values: &mut [f64], x: f64, y: f64) {
    let m = values.len() - 1;
    let end = values[m];
    for (i, v) in values.iter_mut().enumerate().take(m).skip(1) {
        let w = i as f64 / m as f64;
        *v += (1.0 - w) * x + w * y - w * end;
    }
    values[0] = x;
    values[m] = y;
}

/// `f^{[a,b]}(t) = f(t) − (1−w)·f(a) − w·f(b)`, `w = (t−a)/(b−a)`.
pub fn affine_to_standard(path: &SampledPath) -> SampledPath {
    let vals = path.values();
    let m = vals.len() - 1;
    let (fa, fb) = (vals[0], vals[m]);
    let mut out: Vec<f64> = vals
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let w = i as f64 / m as f64;
            v - (1.0 - w) * fa - w * fb
        })
        .collect();
    out[0] = 0.0;
    out[m] = 0.0;
    SampledPath::from_parts_unchecked(*path.grid(), out)
}
