use super::avoid::{no_touch_unchecked, survival_log_weight, survives};
use super::{BridgeEnsembleSpec, CrossingCorrection, DecreasingList, FloorCurve};
use crate::error::{invalid, Error, Result};
use crate::stochastic::{sample_brownian_bridge, RngStream, SampledPath};

/// `k` independent bridges with the given boundary data (no conditioning).
pub fn sample_independent(spec: &BridgeEnsembleSpec, rng: &mut RngStream) -> Vec<SampledPath> {
    spec.entrance
        .values()
        .iter()
        .zip(spec.exit.values())
        .map(|(&x, &y)| sample_brownian_bridge(spec.grid, x, y, rng))
        .collect()
}

/// Rejection sampler for the avoiding ensemble. Returns the curves and the
/// number of attempts used.
pub fn sample_avoiding(
    spec: &BridgeEnsembleSpec,
    rng: &mut RngStream,
    max_attempts: u64,
    correction: CrossingCorrection,
) -> Result<(Vec<SampledPath>, u64)> {
    let steps = spec.grid.steps();
    let mut weight_sum = 0.0;
    for attempt in 1..=max_attempts {
        let curves = sample_independent(spec, rng);
        let u = rng.uniform();
        if !no_touch_unchecked(&curves, &spec.floor, 0, steps) {
            continue;
        }
        if correction == CrossingCorrection::On {
            weight_sum += survival_log_weight(&curves, &spec.floor, 0, steps).exp();
        } else {
            weight_sum += 1.0;
        }
        if survives(&curves, &spec.floor, correction, u) {
            return Ok((curves, attempt));
        }
    }
    Err(Error::RejectionExhausted {
        attempts: max_attempts,
        accepted: 0,
        acceptance_estimate: weight_sum / max_attempts as f64,
    })
}

/// Resamples curves `0..k` on `[a, b]` as avoiding bridges with the current
/// boundary values, above curve `k` (or no floor if `k` is the whole ensemble).
/// Values outside the block are copied verbatim.
pub fn gibbs_resample(
    ensemble: &[SampledPath],
    k: usize,
    (a, b): (f64, f64),
    rng: &mut RngStream,
    max_attempts: u64,
    correction: CrossingCorrection,
) -> Result<Vec<SampledPath>> {
    let n = ensemble.len();
    if k == 0 || k > n {
        return invalid(format!("need 1 <= k <= {n}, got {k}"));
    }
    let grid = *ensemble[0].grid();
    if ensemble.iter().any(|c| !c.grid().matches(&grid)) {
        return Err(Error::GridMismatch("ensemble curves use different grids".into()));
    }
    let (Some(ia), Some(ib)) = (grid.index_of(a), grid.index_of(b)) else {
        return invalid(format!("[{a}, {b}] endpoints must be gridpoints"));
    };
    if !(0 < ia && ia < ib && ib < grid.steps()) {
        return invalid(format!("[{a}, {b}] must lie strictly inside the domain"));
    }
    let sub = grid.sub(ia, ib)?;
    let entrance = DecreasingList::strict(ensemble[..k].iter().map(|c| c.at(ia)).collect())?;
    let exit = DecreasingList::strict(ensemble[..k].iter().map(|c| c.at(ib)).collect())?;
    let floor = if k < n {
        FloorCurve::brownian(ensemble[k].slice(ia, ib)?)
    } else {
        FloorCurve::NegInfinity
    };
    let spec = BridgeEnsembleSpec::new(sub, entrance, exit, floor)?;
    let (fresh, _) = sample_avoiding(&spec, rng, max_attempts, correction)?;
    let mut out = ensemble.to_vec();
    for (curve, new) in out.iter_mut().zip(&fresh) {
        curve.values_mut()[ia + 1..ib].copy_from_slice(&new.values()[1..ib - ia]);
    }
    Ok(out)
}
