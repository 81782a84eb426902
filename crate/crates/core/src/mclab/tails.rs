use super::estimate::{fit_tail_decay, run_trials, tail_reports, EstimateReport, LineFit, Tail};
use super::geometry::parabola_q;
use crate::bridges::{cell_crossing_prob, kolmogorov_two_sided};
use crate::error::{invalid, Result};
use crate::stochastic::{affine_to_standard, RngStream, SampledPath};

/// Probability, given the gridpoint values, that the Brownian interpolation
/// of `path` (local variance `diffusion` per unit time) reaches `upper` or
/// falls to `lower`. Cells are treated independently and within a cell the
/// two levels are combined as if independent, which is exact for one level.
pub fn cell_exceedance(path: &SampledPath, upper: Option<f64>, lower: Option<f64>, diffusion: f64) -> f64 {
    let v = path.values();
    if upper.is_some_and(|u| v.iter().any(|&x| x >= u)) || lower.is_some_and(|l| v.iter().any(|&x| x <= l)) {
        return 1.0;
    }
    let h = path.grid().h();
    let mut log_stay = 0.0;
    for w in v.windows(2) {
        if let Some(u) = upper {
            log_stay += (-cell_crossing_prob(u - w[0], u - w[1], h, diffusion)).ln_1p();
        }
        if let Some(l) = lower {
            log_stay += (-cell_crossing_prob(w[0] - l, w[1] - l, h, diffusion)).ln_1p();
        }
    }
    -log_stay.exp_m1()
}

/// Ensemble-versus-bridge comparison at one level `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeComparison {
    pub s: f64,
    pub report: EstimateReport,
    /// Exact two-sided sup probability of a standard bridge.
    pub baseline: f64,
    /// The bracket `[e^{-2s²}, 2e^{-2s²}]`.
    pub bracket: (f64, f64),
    pub ratio: f64,
}

/// Estimates `P(sup |X^{[K,K+d]}| ≥ s √d)` where `X^{[K,K+d]}` is the sampled
/// curve minus its chord, and compares with the Brownian bridge. With
/// `cell_diffusion = Some(σ²)` each trial contributes its conditional
/// exceedance probability under Brownian interpolation instead of the grid
/// indicator.
#[allow(clippy::too_many_arguments)]
pub fn bridge_compare_tail<F>(
    label: &str,
    sampler: F,
    d: f64,
    s_list: &[f64],
    trials: u64,
    seed: u64,
    tag: u16,
    cell_diffusion: Option<f64>,
) -> Result<Vec<BridgeComparison>>
where
    F: Fn(&mut RngStream) -> Result<SampledPath> + Sync,
{
    if !(d >= 1.0) {
        return invalid(format!("window length d = {d} must be at least 1"));
    }
    if trials == 0 {
        return invalid("need at least one trial");
    }
    let per_trial = run_trials(seed, tag, trials, |rng| {
        let path = sampler(rng)?;
        let w = path.grid().b() - path.grid().a();
        if (w - d).abs() > 1e-9 * d {
            return invalid(format!("sampler returned a window of length {w}, expected {d}"));
        }
        let std = affine_to_standard(&path);
        Ok((
            std.grid().steps(),
            s_list
                .iter()
                .map(|&s| {
                    let c = s * d.sqrt();
                    match cell_diffusion {
                        Some(sig2) => cell_exceedance(&std, Some(c), Some(-c), sig2),
                        None => (std.max() >= c || std.min() <= -c) as u8 as f64,
                    }
                })
                .collect::<Vec<f64>>(),
        ))
    })?;
    let steps = per_trial[0].0;
    s_list
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            let vals: Vec<f64> = per_trial.iter().map(|(_, v)| v[j]).collect();
            let report = EstimateReport::from_values(label, &vals, steps, seed)?.with_param("s", s);
            let baseline = kolmogorov_two_sided(s);
            let e = (-2.0 * s * s).exp();
            Ok(BridgeComparison { s, ratio: report.estimate / baseline, report, baseline, bracket: (e, 2.0 * e) })
        })
        .collect()
}

/// Tail estimates at one location.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityPoint {
    pub z: f64,
    /// `|z| ≤ c n^{φ₂}`.
    pub in_window: bool,
    /// `P(L(1,z) + Q(z) ≤ -s)` per `s`.
    pub lower: Vec<EstimateReport>,
    /// `P(L(1,z) + Q(z) ≥ s)` per `s`.
    pub upper: Vec<EstimateReport>,
    /// Regression of `-log p̂` on `s^{3/2}` (absent with fewer than three usable points).
    pub lower_fit: Option<LineFit>,
    pub upper_fit: Option<LineFit>,
    pub lower_decreasing: bool,
    pub upper_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub n: usize,
    pub left_endpoint: f64,
    /// `c n^{φ₁}`.
    pub escape_required: f64,
    pub rs1: bool,
    pub points: Vec<RegularityPoint>,
}

/// Regularity parameters `(φ̄, c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityParams {
    pub phi: [f64; 3],
    pub c: f64,
}

/// Checks left-endpoint escape structurally and estimates one-point tails of
/// the top curve. `sample` returns `L(1, z)` for every `z` in `z_list`.
#[allow(clippy::too_many_arguments)]
pub fn check_regularity<F>(
    n: usize,
    left_endpoint: f64,
    sample: F,
    params: RegularityParams,
    z_list: &[f64],
    (s_lower, s_upper): (&[f64], &[f64]),
    trials: u64,
    seed: u64,
    tag: u16,
) -> Result<RegularityReport>
where
    F: Fn(&mut RngStream) -> Result<Vec<f64>> + Sync,
{
    if trials < 100 {
        return invalid(format!("need at least 100 trials, got {trials}"));
    }
    let nf = n as f64;
    let escape_required = params.c * nf.powf(params.phi[0]);
    let rs1 = -left_endpoint >= escape_required;
    let draws = run_trials(seed, tag, trials, |rng| {
        let v = sample(rng)?;
        if v.len() != z_list.len() {
            return invalid("sampler returned the wrong number of locations");
        }
        Ok(v)
    })?;
    let window = params.c * nf.powf(params.phi[1]);
    let points = z_list
        .iter()
        .enumerate()
        .map(|(j, &z)| {
            let centred: Vec<f64> = draws.iter().map(|v| v[j] + parabola_q(z)).collect();
            let neg: Vec<f64> = s_lower.iter().map(|s| -s).collect();
            let lower: Vec<EstimateReport> = tail_reports("lower", &centred, &neg, Tail::Lower, 0, seed)?
                .into_iter()
                .zip(s_lower)
                .map(|(r, &s)| r.with_param("z", z).with_param("s", s))
                .collect();
            let upper: Vec<EstimateReport> = tail_reports("upper", &centred, s_upper, Tail::Upper, 0, seed)?
                .into_iter()
                .zip(s_upper)
                .map(|(r, &s)| r.with_param("z", z).with_param("s", s))
                .collect();
            let dec = |r: &[EstimateReport]| r.windows(2).all(|w| w[1].estimate <= w[0].estimate);
            Ok(RegularityPoint {
                z,
                in_window: z >= left_endpoint && z.abs() <= window,
                lower_fit: fit_tail_decay(s_lower, &lower).ok(),
                upper_fit: fit_tail_decay(s_upper, &upper).ok(),
                lower_decreasing: dec(&lower),
                upper_decreasing: dec(&upper),
                lower,
                upper,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegularityReport { n, left_endpoint, escape_required, rs1, points })
}
