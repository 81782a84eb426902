use super::{cell_crossing_prob, CrossingCorrection, FloorCurve, FloorRoughness};
use crate::error::{Error, Result};
use crate::stochastic::SampledPath;

fn check_grids(curves: &[SampledPath], floor: &FloorCurve) -> Result<()> {
    let Some(first) = curves.first() else {
        return Err(Error::InvalidInput("empty ensemble".into()));
    };
    let g = first.grid();
    if curves.iter().any(|c| !c.grid().matches(g)) {
        return Err(Error::GridMismatch("ensemble curves use different grids".into()));
    }
    if let Some(f) = floor.path() {
        if !f.grid().matches(g) {
            return Err(Error::GridMismatch("floor and ensemble use different grids".into()));
        }
    }
    Ok(())
}

/// Strict ordering of the curves, and of the bottom curve over the floor, at
/// every gridpoint `i0..=i1`.
pub fn no_touch_range(curves: &[SampledPath], floor: &FloorCurve, i0: usize, i1: usize) -> Result<bool> {
    check_grids(curves, floor)?;
    let steps = curves[0].grid().steps();
    if i0 > i1 || i1 > steps {
        return Err(Error::InvalidInput(format!("index range {i0}..={i1} outside 0..={steps}")));
    }
    Ok(no_touch_unchecked(curves, floor, i0, i1))
}

pub(crate) fn no_touch_unchecked(curves: &[SampledPath], floor: &FloorCurve, i0: usize, i1: usize) -> bool {
    let k = curves.len();
    for i in i0..=i1 {
        for w in curves.windows(2) {
            if !(w[0].at(i) > w[1].at(i)) {
                return false;
            }
        }
        if let FloorCurve::Curve { path, .. } = floor {
            if !(curves[k - 1].at(i) > path.at(i)) {
                return false;
            }
        }
    }
    true
}

/// Non-touching event on the gridpoints inside `sub = [s, t]` (whole grid if `None`).
pub fn no_touch(curves: &[SampledPath], floor: &FloorCurve, sub: Option<(f64, f64)>) -> Result<bool> {
    check_grids(curves, floor)?;
    let g = *curves[0].grid();
    let (i0, i1) = match sub {
        None => (0, g.steps()),
        Some((s, t)) => {
            if !(s <= t) {
                return Err(Error::InvalidInput(format!("empty sub-interval [{s}, {t}]")));
            }
            let tol = 1e-9 * g.h();
            let i0 = (0..=g.steps()).find(|&i| g.time(i) >= s - tol);
            let i1 = (0..=g.steps()).rev().find(|&i| g.time(i) <= t + tol);
            match (i0, i1) {
                (Some(a), Some(b)) if a <= b => (a, b),
                _ => return Ok(true),
            }
        }
    };
    Ok(no_touch_unchecked(curves, floor, i0, i1))
}

/// Log-probability, given gridpoint values, that no adjacent pair (and not
/// the bottom curve and the floor) meets inside any cell of `i0..=i1`.
/// Assumes the gridpoint ordering already holds.
pub fn survival_log_weight(curves: &[SampledPath], floor: &FloorCurve, i0: usize, i1: usize) -> f64 {
    let h = curves[0].grid().h();
    let k = curves.len();
    let mut logw = 0.0;
    for s in i0..i1 {
        for w in curves.windows(2) {
            let p = cell_crossing_prob(w[0].at(s) - w[1].at(s), w[0].at(s + 1) - w[1].at(s + 1), h, 2.0);
            logw += (-p).ln_1p();
        }
        if let FloorCurve::Curve { path, roughness } = floor {
            let diffusion = match roughness {
                FloorRoughness::Linear => 1.0,
                FloorRoughness::Brownian => 2.0,
            };
            let b = &curves[k - 1];
            let p = cell_crossing_prob(b.at(s) - path.at(s), b.at(s + 1) - path.at(s + 1), h, diffusion);
            logw += (-p).ln_1p();
        }
    }
    logw
}

pub(crate) fn survives(
    curves: &[SampledPath],
    floor: &FloorCurve,
    correction: CrossingCorrection,
    u: f64,
) -> bool {
    match correction {
        CrossingCorrection::Off => true,
        CrossingCorrection::On => {
            let steps = curves[0].grid().steps();
            u.ln() < survival_log_weight(curves, floor, 0, steps)
        }
    }
}
