//! Experiment drivers behind the `mc-lab` subcommands.
//!
//! Each driver has a typed entry point (used by tests) and a `Config` wrapper
//! that fills defaults and renders rows.

use super::estimate::{
    fit_exponent, fit_tail_decay, ks_threshold, ks_two_sample, run_trials, tail_reports, EstimateReport,
    ExponentFit, LineFit, Tail,
};
use super::io::{Config, CsvRow};
use super::tails::{bridge_compare_tail, check_regularity, BridgeComparison, RegularityParams, RegularityReport};
use crate::bridges::{
    gibbs_resample, km_avoidance, no_touch, sample_avoiding, sample_independent, survival_log_weight,
    BridgeEnsembleSpec, CrossingCorrection, DecreasingList, FloorCurve, KmValue,
};
use crate::error::{invalid, Error, Result};
use crate::jump::{regularity_constants, EpsilonPolicy, JumpContext, JumpFrame, SideData};
use crate::lpp::{max_energy_profile, scale_value, BrownianField, ScaledEnsemble};
use crate::rmt::{hbm_eigen_process, sample_gue};
use crate::stochastic::{sample_brownian_bridge, RngStream, SampledPath, TimeGrid};

pub const EXPERIMENTS: &[&str] = &[
    "simulate-lpp",
    "simulate-dyson",
    "estimate-close",
    "estimate-neargeod",
    "check-km",
    "check-gibbs",
    "jump-demo",
    "check-regularity",
    "bridge-compare",
];

const TAG_LPP: u16 = 10;
const TAG_LPP_GUE: u16 = 11;
const TAG_DYSON: u16 = 20;
const TAG_DYSON_GUE: u16 = 21;
const TAG_CLOSE: u16 = 30;
const TAG_NEARGEOD: u16 = 40;
const TAG_KM: u16 = 50;
const TAG_GIBBS_BEFORE: u16 = 60;
const TAG_GIBBS_AFTER: u16 = 61;
const TAG_JUMP: u16 = 70;
const TAG_JUMP_ORACLE: u16 = 71;
const TAG_JUMP_DIRECT: u16 = 72;
const TAG_REGULARITY: u16 = 80;
const TAG_EDGE: u16 = 81;
const TAG_BRIDGE: u16 = 90;

/// Runs the named experiment.
pub fn run(name: &str, cfg: &Config) -> Result<Vec<CsvRow>> {
    match name {
        "simulate-lpp" => simulate_lpp(cfg),
        "simulate-dyson" => simulate_dyson(cfg),
        "estimate-close" => estimate_close(cfg),
        "estimate-neargeod" => estimate_neargeod(cfg),
        "check-km" => check_km(cfg),
        "check-gibbs" => check_gibbs(cfg),
        "jump-demo" => jump_demo(cfg),
        "check-regularity" => check_regularity_cmd(cfg),
        "bridge-compare" => bridge_compare(cfg),
        _ => invalid(format!("unknown experiment {name:?}")),
    }
}

struct RowBase<'a> {
    experiment: &'a str,
    seed: u64,
    n: usize,
    k: usize,
    steps: usize,
    trials: u64,
}

impl RowBase<'_> {
    fn row(&self, name: &str, value: f64, estimate: f64, stderr: f64, extra: String) -> CsvRow {
        CsvRow {
            experiment: self.experiment.to_string(),
            seed: self.seed,
            n: self.n,
            k: self.k,
            steps: self.steps,
            param_name: name.to_string(),
            param_value: value,
            trials: self.trials,
            estimate,
            stderr,
            extra,
        }
    }
}

fn kv(pairs: &[(&str, f64)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k}={}", super::io::fmt_f64(*v))).collect::<Vec<_>>().join(";")
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn correction_of(cfg: &Config, default: bool) -> Result<CrossingCorrection> {
    Ok(if cfg.bool_or("correction", default)? { CrossingCorrection::On } else { CrossingCorrection::Off })
}

/// `(k-1, k-2, ..., 0)` scaled by `spacing`.
fn staircase(k: usize, spacing: f64) -> Vec<f64> {
    (0..k).map(|i| (k - 1 - i) as f64 * spacing).collect()
}

// ---------------------------------------------------------------- simulate-lpp

#[derive(Debug, Clone, PartialEq)]
pub struct LppLevel {
    pub steps: usize,
    /// KS distance per `ℓ = 1..=ell_max`.
    pub ks: Vec<f64>,
    pub lpp_mean: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LppGueComparison {
    pub n: usize,
    pub trials: u64,
    /// Base grid first, then each dyadic refinement of the same fields.
    pub levels: Vec<LppLevel>,
    pub gue_mean: Vec<f64>,
    pub threshold: f64,
}

/// `M^ℓ_n(n)` from the dynamic program against `2n Σ_{i≤ℓ} λ_i(GUE_n(1/(4n)))`.
/// The fields are refined `refine` times, reusing the coarse increments.
pub fn lpp_vs_gue(n: usize, ell_max: usize, steps: usize, refine: usize, trials: u64, seed: u64) -> Result<LppGueComparison> {
    if ell_max == 0 || ell_max > n {
        return invalid(format!("need 1 <= ell <= n = {n}, got {ell_max}"));
    }
    if trials < 2 {
        return invalid("need at least two trials");
    }
    let grid = TimeGrid::new(0.0, n as f64, steps)?;
    let lpp: Vec<Vec<Vec<f64>>> = run_trials(seed, TAG_LPP, trials, |rng| {
        let mut field = BrownianField::sample(n, grid, rng)?;
        let mut out = Vec::with_capacity(refine + 1);
        for level in 0..=refine {
            if level > 0 {
                field = field.refine(rng)?;
            }
            let m = (1..=ell_max)
                .map(|l| max_energy_profile(&field, l).map(|p| p[p.len() - 1]))
                .collect::<Result<Vec<f64>>>()?;
            out.push(m);
        }
        Ok(out)
    })?;
    let nf = n as f64;
    let gue: Vec<Vec<f64>> = run_trials(seed, TAG_LPP_GUE, trials, |rng| {
        let ev = sample_gue(n, 1.0 / (4.0 * nf), rng)?.eigenvalues()?;
        let mut s = 0.0;
        Ok(ev[..ell_max].iter().map(|x| {
            s += 2.0 * nf * x;
            s
        }).collect())
    })?;
    let column = |rows: &[Vec<f64>], l: usize| -> Vec<f64> { rows.iter().map(|r| r[l]).collect() };
    let gue_cols: Vec<Vec<f64>> = (0..ell_max).map(|l| column(&gue, l)).collect();
    let levels = (0..=refine)
        .map(|level| {
            let rows: Vec<Vec<f64>> = lpp.iter().map(|t| t[level].clone()).collect();
            let cols: Vec<Vec<f64>> = (0..ell_max).map(|l| column(&rows, l)).collect();
            LppLevel {
                steps: steps << level,
                ks: cols.iter().zip(&gue_cols).map(|(a, b)| ks_two_sample(a, b)).collect(),
                lpp_mean: cols.iter().map(|c| mean(c)).collect(),
            }
        })
        .collect();
    Ok(LppGueComparison {
        n,
        trials,
        levels,
        gue_mean: gue_cols.iter().map(|c| mean(c)).collect(),
        threshold: ks_threshold(trials as usize, trials as usize),
    })
}

pub fn simulate_lpp(cfg: &Config) -> Result<Vec<CsvRow>> {
    let seed = cfg.u64_or("seed", 1)?;
    let n = cfg.usize_or("n", 5)?;
    let ell = cfg.usize_or("k", 1)?;
    let steps = cfg.usize_or("steps", 1000)?;
    let refine = cfg.usize_or("refine", 0)?;
    let trials = cfg.u64_or("trials", 1000)?;
    let out = lpp_vs_gue(n, ell, steps, refine, trials, seed)?;
    let mut rows = Vec::new();
    for level in &out.levels {
        let base = RowBase { experiment: "simulate-lpp", seed, n, k: ell, steps: level.steps, trials };
        for l in 0..ell {
            let extra = kv(&[
                ("ks_threshold", out.threshold),
                ("lpp_mean", level.lpp_mean[l]),
                ("gue_mean", out.gue_mean[l]),
            ]);
            rows.push(base.row("ell", (l + 1) as f64, level.ks[l], f64::NAN, extra));
        }
    }
    Ok(rows)
}

// -------------------------------------------------------------- simulate-dyson

#[derive(Debug, Clone, PartialEq)]
pub struct DysonCheck {
    /// Eigenvalue index (1 = largest).
    pub index: usize,
    pub ks: f64,
    pub threshold: f64,
    pub hbm_mean: f64,
    pub hbm_stderr: f64,
    pub gue_mean: f64,
}

/// Eigenvalues of Hermitian Brownian motion at time `n` (started at zero and
/// run on `steps` increments) against direct draws of `GUE_n(n)`.
pub fn dyson_vs_gue(n: usize, k: usize, steps: usize, trials: u64, seed: u64) -> Result<Vec<DysonCheck>> {
    if k == 0 || k > n {
        return invalid(format!("need 1 <= k <= n = {n}, got {k}"));
    }
    if trials < 2 {
        return invalid("need at least two trials");
    }
    let grid = TimeGrid::new(0.0, n as f64, steps)?;
    let hbm: Vec<Vec<f64>> = run_trials(seed, TAG_DYSON, trials, |rng| {
        let p = hbm_eigen_process(n, grid, rng)?;
        Ok((0..k).map(|i| p.value(i, steps)).collect())
    })?;
    let direct: Vec<Vec<f64>> = run_trials(seed, TAG_DYSON_GUE, trials, |rng| {
        let ev = sample_gue(n, n as f64, rng)?.eigenvalues()?;
        Ok(ev[..k].to_vec())
    })?;
    Ok((0..k)
        .map(|i| {
            let a: Vec<f64> = hbm.iter().map(|r| r[i]).collect();
            let b: Vec<f64> = direct.iter().map(|r| r[i]).collect();
            let m = mean(&a);
            let var = a.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (a.len() - 1) as f64;
            DysonCheck {
                index: i + 1,
                ks: ks_two_sample(&a, &b),
                threshold: ks_threshold(a.len(), b.len()),
                hbm_mean: m,
                hbm_stderr: (var / a.len() as f64).sqrt(),
                gue_mean: mean(&b),
            }
        })
        .collect())
}

pub fn simulate_dyson(cfg: &Config) -> Result<Vec<CsvRow>> {
    let seed = cfg.u64_or("seed", 1)?;
    let n = cfg.usize_or("n", 5)?;
    let k = cfg.usize_or("k", 2)?;
    let steps = cfg.usize_or("steps", 50)?;
    let trials = cfg.u64_or("trials", 2000)?;
    let base = RowBase { experiment: "simulate-dyson", seed, n, k, steps, trials };
    Ok(dyson_vs_gue(n, k, steps, trials, seed)?
        .into_iter()
        .map(|c| {
            let extra = kv(&[("ks", c.ks), ("ks_threshold", c.threshold), ("gue_mean", c.gue_mean)]);
            base.row("index", c.index as f64, c.hbm_mean, c.hbm_stderr, extra)
        })
        .collect())
}

// -------------------------------------------------------------- estimate-close

/// Probabilities on a grid of parameters and the fitted log-log slope.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentEstimate {
    pub xs: Vec<f64>,
    pub reports: Vec<EstimateReport>,
    pub fit: Option<ExponentFit>,
    /// Why the fit is missing, if it is.
    pub fit_error: Option<String>,
}

impl ExponentEstimate {
    fn new(xs: &[f64], reports: Vec<EstimateReport>) -> Self {
        let (fit, fit_error) = match fit_exponent(xs, &reports) {
            Ok(f) => (Some(f), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Self { xs: xs.to_vec(), reports, fit, fit_error }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CloseEstimate {
    /// `P(NoTouch ∩ {L_1(x) - L_k(x) ≤ φ})` per `φ`.
    pub close: ExponentEstimate,
    pub no_touch: EstimateReport,
}

/// Free bridges reweighted by their gridpoint ordering and (with the
/// correction on) the in-cell survival probability; each trial contributes
/// that weight times the Close indicator.
pub fn close_probabilities(
    spec: &BridgeEnsembleSpec,
    x: f64,
    phis: &[f64],
    trials: u64,
    seed: u64,
    correction: CrossingCorrection,
) -> Result<CloseEstimate> {
    let k = spec.k();
    if k < 2 {
        return invalid("closeness needs at least two curves");
    }
    let Some(ix) = spec.grid.index_of(x) else {
        return invalid(format!("x = {x} is not a gridpoint"));
    };
    if phis.iter().any(|p| !(*p > 0.0)) {
        return invalid("closeness levels must be positive");
    }
    let steps = spec.grid.steps();
    let per_trial: Vec<(f64, f64)> = run_trials(seed, TAG_CLOSE, trials, |rng| {
        let curves = sample_independent(spec, rng);
        if !no_touch(&curves, &spec.floor, None)? {
            return Ok((0.0, f64::INFINITY));
        }
        let w = match correction {
            CrossingCorrection::On => survival_log_weight(&curves, &spec.floor, 0, steps).exp(),
            CrossingCorrection::Off => 1.0,
        };
        Ok((w, curves[0].at(ix) - curves[k - 1].at(ix)))
    })?;
    let weights: Vec<f64> = per_trial.iter().map(|p| p.0).collect();
    let no_touch = EstimateReport::from_values("no_touch", &weights, steps, seed)?;
    let reports = phis
        .iter()
        .map(|&phi| {
            let vals: Vec<f64> = per_trial.iter().map(|&(w, g)| if g <= phi { w } else { 0.0 }).collect();
            Ok(EstimateReport::from_values("close", &vals, steps, seed)?.with_param("phi", phi))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CloseEstimate { close: ExponentEstimate::new(phis, reports), no_touch })
}

fn fit_rows(base: &RowBase, est: &ExponentEstimate, name: &str) -> Vec<CsvRow> {
    let mut rows: Vec<CsvRow> = est
        .reports
        .iter()
        .zip(&est.xs)
        .map(|(r, &x)| base.row(name, x, r.estimate, r.stderr, kv(&[("hits", r.hits as f64)])))
        .collect();
    match &est.fit {
        Some(f) => rows.push(base.row(
            "slope",
            f.used.iter().filter(|&&u| u).count() as f64,
            f.slope,
            f.slope_stderr,
            kv(&[("intercept", f.intercept), ("r_squared", f.r_squared)]),
        )),
        None => rows.push(base.row(
            "slope",
            0.0,
            f64::NAN,
            f64::NAN,
            format!("error={}", est.fit_error.as_deref().unwrap_or("")),
        )),
    }
    rows
}

pub fn estimate_close(cfg: &Config) -> Result<Vec<CsvRow>> {
    let seed = cfg.u64_or("seed", 1)?;
    let k = cfg.usize_or("k", 2)?;
    let steps = cfg.usize_or("steps", 64)?;
    let trials = cfg.u64_or("trials", 1_000_000)?;
    let a = cfg.f64_or("a", -1.0)?;
    let b = cfg.f64_or("b", 1.0)?;
    let x = cfg.f64_or("x", 0.5 * (a + b))?;
    let spacing = cfg.f64_or("spacing", 1.0)?;
    let entrance = cfg.list_or("entrance", &staircase(k, spacing))?;
    let exit = cfg.list_or("exit", &staircase(k, spacing))?;
    let phis = cfg.list_or("phis", &[0.05, 0.1, 0.2, 0.4])?;
    let correction = correction_of(cfg, true)?;
    let spec = BridgeEnsembleSpec::free(TimeGrid::new(a, b, steps)?, entrance, exit)?;
    let out = close_probabilities(&spec, x, &phis, trials, seed, correction)?;
    let base = RowBase { experiment: "estimate-close", seed, n: 0, k, steps, trials };
    let mut rows = vec![base.row("no_touch", 0.0, out.no_touch.estimate, out.no_touch.stderr, String::new())];
    rows.extend(fit_rows(&base, &out.close, "phi"));
    Ok(rows)
}

// ----------------------------------------------------------- estimate-neargeod

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NearGeodSource {
    /// Dyson curves at `t = n + 2n^{2/3} x`, drawn as `GUE_n(t)`.
    Gue,
    /// The LPP line ensemble from the dynamic program.
    Lpp { steps: usize },
}

/// Scaled deficit `Σ_{i=2}^k (𝓛(1,x) - 𝓛(i,x))` for one draw.
pub fn sample_deficit(source: NearGeodSource, n: usize, k: usize, x: f64, rng: &mut RngStream) -> Result<f64> {
    if k < 2 || k > n {
        return invalid(format!("need 2 <= k <= n = {n}, got {k}"));
    }
    let nf = n as f64;
    let t = nf + 2.0 * nf.powf(2.0 / 3.0) * x;
    if !(x > ScaledEnsemble::left_endpoint(n)) {
        return invalid(format!("x = {x} is left of the domain"));
    }
    let top: Vec<f64> = match source {
        NearGeodSource::Gue => sample_gue(n, t, rng)?.eigenvalues()?[..k].to_vec(),
        NearGeodSource::Lpp { steps } => {
            let field = BrownianField::sample(n, TimeGrid::new(0.0, t, steps)?, rng)?;
            let mut prev = 0.0;
            let mut out = Vec::with_capacity(k);
            for l in 1..=k {
                let p = max_energy_profile(&field, l)?;
                let m = p[p.len() - 1];
                out.push(m - prev);
                prev = m;
            }
            out
        }
    };
    let s: Vec<f64> = top.iter().map(|&l| scale_value(n, x, l)).collect();
    Ok(s[1..].iter().map(|v| s[0] - v).sum())
}

/// `P(deficit ≤ 2^{-1/2} r)` per `r`, with the log-log slope.
pub fn neargeod_probabilities(
    source: NearGeodSource,
    n: usize,
    k: usize,
    x: f64,
    rs: &[f64],
    trials: u64,
    seed: u64,
) -> Result<ExponentEstimate> {
    if trials < 100 {
        return invalid(format!("need at least 100 trials, got {trials}"));
    }
    let d = run_trials(seed, TAG_NEARGEOD, trials, |rng| sample_deficit(source, n, k, x, rng))?;
    let steps = match source {
        NearGeodSource::Gue => 0,
        NearGeodSource::Lpp { steps } => steps,
    };
    let thresholds: Vec<f64> = rs.iter().map(|r| r * std::f64::consts::FRAC_1_SQRT_2).collect();
    let reports = tail_reports("near_geod", &d, &thresholds, Tail::Lower, steps, seed)?
        .into_iter()
        .zip(rs)
        .map(|(rep, &r)| rep.with_param("r", r))
        .collect();
    Ok(ExponentEstimate::new(rs, reports))
}

pub fn estimate_neargeod(cfg: &Config) -> Result<Vec<CsvRow>> {
    let seed = cfg.u64_or("seed", 1)?;
    let n = cfg.usize_or("n", 8)?;
    let k = cfg.usize_or("k", 2)?;
    let x = cfg.f64_or("x", 0.0)?;
    let trials = cfg.u64_or("trials", 100_000)?;
    let rs = cfg.list_or("rs", &[0.15, 0.2, 0.3, 0.4])?;
    let (source, steps) = match cfg.str_or("source", "gue") {
        "gue" => (NearGeodSource::Gue, 0),
        "lpp" => {
            let steps = cfg.usize_or("steps", 400)?;
            (NearGeodSource::Lpp { steps }, steps)
        }
        other => return invalid(format!("unknown source {other:?} (gue or lpp)")),
    };
    let out = neargeod_probabilities(source, n, k, x, &rs, trials, seed)?;
    let base = RowBase { experiment: "estimate-neargeod", seed, n, k, steps, trials };
    Ok(fit_rows(&base, &out, "r"))
}

// -------------------------------------------------------------------- check-km

/// Karlin–McGregor value and the acceptance frequency of single rejection
/// attempts on the same data.
pub fn km_vs_rejection(
    spec: &BridgeEnsembleSpec,
    trials: u64,
    seed: u64,
    correction: CrossingCorrection,
) -> Result<(KmValue, EstimateReport)> {
    let km = km_avoidance(spec)?;
    let acc: Vec<f64> = run_trials(seed, TAG_KM, trials, |rng| match sample_avoiding(spec, rng, 1, correction) {
        Ok(_) => Ok(1.0),
        Err(Error::RejectionExhausted { .. }) => Ok(0.0),
        Err(e) => Err(e),
    })?;
    let report = EstimateReport::from_values("acceptance", &acc, spec.grid.steps(), seed)?;
    Ok((km, report))
}

pub fn check_km(cfg: &Config) -> Result<Vec<CsvRow>> {
    let seed = cfg.u64_or("seed", 1)?;
    let k = cfg.usize_or("k", 2)?;
    let steps = cfg.usize_or("steps", 200)?;
    let trials = cfg.u64_or("trials", 100_000)?;
    let a = cfg.f64_or("a", 0.0)?;
    let b = cfg.f64_or("b", 1.0)?;
    let entrance = cfg.list_or("entrance", &staircase(k, 1.0))?;
    let exit = cfg.list_or("exit", &staircase(k, 1.0))?;
    let correction = correction_of(cfg, true)?;
    let spec = BridgeEnsembleSpec::free(TimeGrid::new(a, b, steps)?, entrance, exit)?;
    let (km, rep) = km_vs_rejection(&spec, trials, seed, correction)?;
    let base = RowBase { experiment: "check-km", seed, n: 0, k: spec.k(), steps, trials };
    Ok(vec![
        base.row(
            "determinant",
            0.0,
            km.probability,
            0.0,
            kv(&[("pivot_ratio", km.pivot_ratio), ("ill_conditioned", km.ill_conditioned as u8 as f64)]),
        ),
        base.row("rejection", 0.0, rep.estimate, rep.stderr, kv(&[("z", rep.z_score(km.probability))])),
    ])
}

// ----------------------------------------------------------------- check-gibbs

#[derive(Debug, Clone, PartialEq)]
pub struct GibbsCheck {
    pub before: Vec<f64>,
    pub after: Vec<f64>,
    pub ks: f64,
    pub threshold: f64,
}

/// One-point marginal of curve `curve` (0-based) at `x`: fresh avoiding
/// samples against independent samples whose top `resample_k` curves were
/// resampled on `block`.
#[allow(clippy::too_many_arguments)]
pub fn gibbs_invariance(
    spec: &BridgeEnsembleSpec,
    resample_k: usize,
    block: (f64, f64),
    curve: usize,
    x: f64,
    trials: u64,
    seed: u64,
    max_attempts: u64,
    correction: CrossingCorrection,
) -> Result<GibbsCheck> {
    if curve >= spec.k() {
        return invalid(format!("curve index {curve} out of range"));
    }
    let Some(ix) = spec.grid.index_of(x) else {
        return invalid(format!("x = {x} is not a gridpoint"));
    };
    let before = run_trials(seed, TAG_GIBBS_BEFORE, trials, |rng| {
        Ok(sample_avoiding(spec, rng, max_attempts, correction)?.0[curve].at(ix))
    })?;
    let after = run_trials(seed, TAG_GIBBS_AFTER, trials, |rng| {
        let (c, _) = sample_avoiding(spec, rng, max_attempts, correction)?;
        Ok(gibbs_resample(&c, resample_k, block, rng, max_attempts, correction)?[curve].at(ix))
    })?;
    let ks = ks_two_sample(&before, &after);
    let threshold = ks_threshold(before.len(), after.len());
    Ok(GibbsCheck { before, after, ks, threshold })
}

pub fn check_gibbs(cfg: &Config) -> Result<Vec<CsvRow>> {
    let seed = cfg.u64_or("seed", 1)?;
    let k = cfg.usize_or("k", 3)?;
    let steps = cfg.usize_or("steps", 40)?;
    let trials = cfg.u64_or("trials", 10_000)?;
    let a = cfg.f64_or("a", -1.0)?;
    let b = cfg.f64_or("b", 1.0)?;
    let centre: Vec<f64> = staircase(k, 2.0).iter().map(|v| v - (k - 1) as f64).collect();
    let entrance = cfg.list_or("entrance", &centre)?;
    let exit = cfg.list_or("exit", &centre)?;
    let block = (cfg.f64_or("block_a", -0.5)?, cfg.f64_or("block_b", 0.5)?);
    let resample_k = cfg.usize_or("resample_k", 2.min(k))?;
    let curve = cfg.usize_or("curve", 1)?;
    let x = cfg.f64_or("x", 0.0)?;
    let max_attempts = cfg.u64_or("max_attempts", 1_000_000)?;
    let correction = correction_of(cfg, true)?;
    if curve == 0 {
        return invalid("curve indices start at 1");
    }
    let spec = BridgeEnsembleSpec::free(TimeGrid::new(a, b, steps)?, entrance, exit)?;
    let out = gibbs_invariance(&spec, resample_k, block, curve - 1, x, trials, seed, max_attempts, correction)?;
    let base = RowBase { experiment: "check-gibbs", seed, n: 0, k, steps, trials };
    Ok(vec![base.row(
        "ks",
        x,
        out.ks,
        f64::NAN,
        kv(&[("ks_threshold", out.threshold), ("mean_before", mean(&out.before)), ("mean_after", mean(&out.after))]),
    )])
}

// ------------------------------------------------------------------- jump-demo

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpAuditParams {
    pub k: usize,
    pub t: f64,
    pub d_ip: f64,
    pub spacing: f64,
    pub contexts: u64,
    pub samples_per_context: usize,
    pub max_attempts: u64,
}

/// Invariant counts over random contexts. Every `*_violations` field should be zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct JumpAudit {
    pub contexts: u64,
    /// Contexts without a non-degenerate middle interval or admissible poles.
    pub skipped: u64,
    pub gap_violations: u64,
    pub cardinality_violations: u64,
    pub endpoint_violations: u64,
    pub tent_violations: u64,
    pub slope_violations: u64,
    pub sample_violations: u64,
    pub t3_without_t2: u64,
    pub exhausted: u64,
    pub samples: u64,
    pub t3_passes: u64,
    pub fav: u64,
    pub mean_attempts: f64,
    pub max_poles: usize,
    /// `log` of the lower bound on the middle-test acceptance.
    pub log_t3_bound: f64,
    pub warnings: Vec<String>,
}

impl JumpAudit {
    pub fn violations(&self) -> u64 {
        self.gap_violations
            + self.cardinality_violations
            + self.endpoint_violations
            + self.tent_violations
            + self.slope_violations
            + self.sample_violations
            + self.t3_without_t2
    }

    pub fn t3_frequency(&self) -> f64 {
        if self.samples == 0 { 0.0 } else { self.t3_passes as f64 / self.samples as f64 }
    }
}

fn jump_frame(p: &JumpAuditParams) -> Result<JumpFrame> {
    let rc = regularity_constants(p.k, 1.0, 1.0)?;
    JumpFrame::with_window(rc, p.t, p.d_ip, p.spacing, EpsilonPolicy::Warn)
}

/// A random floor (scaled parabola plus a bridge) and ordered boundary data
/// lifted between the floor's end values and its maximum.
pub fn random_context_data(frame: &JumpFrame, rng: &mut RngStream) -> (SampledPath, Vec<f64>, Vec<f64>) {
    let g = *frame.grid();
    let curvature = 0.1 + 0.9 * rng.uniform();
    let noise = 1.5 * rng.uniform();
    let level = 2.0 * rng.uniform() - 1.0;
    let wiggle = sample_brownian_bridge(g, 0.0, 0.0, rng);
    let floor = SampledPath::new(
        g,
        (0..g.len()).map(|i| level - curvature * g.time(i).powi(2) + noise * wiggle.at(i)).collect(),
    )
    .expect("finite floor");
    let stack = |base: f64, rng: &mut RngStream| {
        let mut v = vec![0.0; frame.k()];
        let mut cur = base;
        for slot in v.iter_mut().rev() {
            cur += 0.2 + 1.8 * rng.uniform();
            *slot = cur;
        }
        v
    };
    let top = floor.max();
    let lift = |end: f64, rng: &mut RngStream| end + (0.5 + 0.5 * rng.uniform()) * (top - end);
    let (a, b) = (lift(floor.first(), rng), lift(floor.last(), rng));
    let u = stack(a, rng);
    let v = stack(b, rng);
    (floor, u, v)
}

/// Builds random contexts, checks the structural invariants exactly and
/// draws jump samples from each.
pub fn jump_audit(p: &JumpAuditParams, seed: u64) -> Result<JumpAudit> {
    let frame = jump_frame(p)?;
    let t = frame.t();
    let d = p.d_ip;
    let per: Vec<Option<JumpAudit>> = run_trials(seed, TAG_JUMP, p.contexts, |rng| {
        let (floor, u, v) = random_context_data(&frame, rng);
        let (_, lr) = frame.locate(&floor)?;
        if lr.degenerate || lr.r - lr.l <= d {
            return Ok(None);
        }
        let ctx = match JumpContext::new(&frame, floor, u, v, SideData::Sample(rng)) {
            Ok(c) => c,
            Err(Error::FavFailure(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut a = JumpAudit { contexts: 1, ..Default::default() };
        let xs = &ctx.poles().xs;
        let (l, r) = ctx.lr();
        a.max_poles = xs.len();
        a.gap_violations += xs.windows(2).filter(|w| !(w[1] - w[0] > d)).count() as u64;
        a.cardinality_violations += (xs.len() as f64 > 2.0 * t) as u64;
        a.endpoint_violations += (xs[0] != l || xs[xs.len() - 1] != r) as u64;
        let (il, ir) = ctx.lr_indices();
        let g = frame.grid();
        a.tent_violations += (il..=ir)
            .filter(|&i| !(ctx.floor().at(i) <= ctx.tent().eval(g.time(i)) + 8.0 * d * t + 1e-9 * t.max(1.0)))
            .count() as u64;
        a.slope_violations +=
            ctx.tent().slopes().iter().filter(|s| s.abs() > 4.0 * t + 1e-9 * t.max(1.0)).count() as u64;
        a.fav += ctx.fav() as u64;
        let mut attempts = 0u64;
        for _ in 0..p.samples_per_context {
            match ctx.sample_jump(rng, p.max_attempts) {
                Ok(s) => {
                    let out = ctx.run_tests(&s.curves);
                    a.samples += 1;
                    attempts += s.attempts;
                    a.sample_violations += !(out.t1 && out.t2) as u64;
                    a.t3_without_t2 += (out.t3 && !out.t2) as u64;
                    a.t3_passes += (s.t3 && out.t3) as u64;
                }
                Err(Error::RejectionExhausted { .. }) => a.exhausted += 1,
                Err(e) => return Err(e),
            }
        }
        a.mean_attempts = attempts as f64;
        Ok(Some(a))
    })?;
    let mut total = JumpAudit {
        log_t3_bound: frame.constants().log_t3_bound(frame.eps(), d),
        warnings: frame.warnings().to_vec(),
        ..Default::default()
    };
    let mut attempts = 0.0;
    for a in per {
        let Some(a) = a else {
            total.skipped += 1;
            continue;
        };
        total.contexts += 1;
        total.gap_violations += a.gap_violations;
        total.cardinality_violations += a.cardinality_violations;
        total.endpoint_violations += a.endpoint_violations;
        total.tent_violations += a.tent_violations;
        total.slope_violations += a.slope_violations;
        total.sample_violations += a.sample_violations;
        total.t3_without_t2 += a.t3_without_t2;
        total.exhausted += a.exhausted;
        total.samples += a.samples;
        total.t3_passes += a.t3_passes;
        total.fav += a.fav;
        total.max_poles = total.max_poles.max(a.max_poles);
        attempts += a.mean_attempts;
    }
    total.mean_attempts = if total.samples == 0 { 0.0 } else { attempts / total.samples as f64 };
    Ok(total)
}

/// Draws a jump sample that also passes the middle test.
pub fn sample_jump_t3(ctx: &JumpContext, rng: &mut RngStream, max_attempts: u64) -> Result<Vec<SampledPath>> {
    for _ in 0..max_attempts {
        let s = ctx.sample_jump(rng, max_attempts)?;
        if s.t3 {
            return Ok(s.curves);
        }
    }
    Err(Error::RejectionExhausted { attempts: max_attempts, accepted: 0, acceptance_estimate: 0.0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpOracle {
    pub direct: Vec<f64>,
    pub resampled: Vec<f64>,
    pub ks: f64,
    pub threshold: f64,
}

/// Avoiding ensembles above a fixed floor on the frame: the value of curve 1
/// at `x` in fresh draws against draws whose middle was replaced by a jump
/// sample (conditioned on the middle test) built from their own side data.
#[allow(clippy::too_many_arguments)]
pub fn jump_vs_avoiding(
    frame: &JumpFrame,
    floor: &SampledPath,
    u: &[f64],
    v: &[f64],
    x: f64,
    samples: u64,
    seed: u64,
    max_attempts: u64,
) -> Result<JumpOracle> {
    let g = *frame.grid();
    let spec = BridgeEnsembleSpec::new(
        g,
        DecreasingList::strict(u.to_vec())?,
        DecreasingList::strict(v.to_vec())?,
        FloorCurve::linear(floor.clone()),
    )?;
    let Some(ix) = g.index_of(x) else {
        return invalid(format!("x = {x} is not a gridpoint"));
    };
    let draw = |rng: &mut RngStream| -> Result<Vec<SampledPath>> {
        Ok(sample_avoiding(&spec, rng, max_attempts, CrossingCorrection::Off)?.0)
    };
    let direct = run_trials(seed, TAG_JUMP_DIRECT, samples, |rng| Ok(draw(rng)?[0].at(ix)))?;
    let resampled = run_trials(seed, TAG_JUMP_ORACLE, samples, |rng| {
        let y = draw(rng)?;
        let ctx = JumpContext::from_ensemble(frame, &y, floor.clone())?;
        let (il, ir) = ctx.lr_indices();
        if !(il <= ix && ix <= ir) {
            return invalid(format!("x = {x} lies outside the middle interval"));
        }
        let mid = sample_jump_t3(&ctx, rng, max_attempts)?;
        Ok(mid[0].at(ix - il))
    })?;
    let ks = ks_two_sample(&direct, &resampled);
    let threshold = ks_threshold(direct.len(), resampled.len());
    Ok(JumpOracle { direct, resampled, ks, threshold })
}

pub fn jump_demo(cfg: &Config) -> Result<Vec<CsvRow>> {
    let seed = cfg.u64_or("seed", 1)?;
    let p = JumpAuditParams {
        k: cfg.usize_or("k", 2)?,
        t: cfg.f64_or("t", 1.5)?,
        d_ip: cfg.f64_or("d_ip", 1.0)?,
        spacing: cfg.f64_or("spacing", 0.05)?,
        contexts: cfg.u64_or("trials", 1000)?,
        samples_per_context: cfg.usize_or("samples", 1)?,
        max_attempts: cfg.u64_or("max_attempts", 10_000)?,
    };
    let frame = jump_frame(&p)?;
    let steps = frame.grid().steps();
    let base = RowBase { experiment: "jump-demo", seed, n: 0, k: p.k, steps, trials: p.contexts };
    match cfg.str_or("mode", "audit") {
        "audit" => {
            let a = jump_audit(&p, seed)?;
            let count = |name: &str, v: u64| base.row(name, frame.t(), v as f64, 0.0, String::new());
            Ok(vec![
                count("contexts", a.contexts),
                count("skipped", a.skipped),
                count("gap_violations", a.gap_violations),
                count("cardinality_violations", a.cardinality_violations),
                count("endpoint_violations", a.endpoint_violations),
                count("tent_violations", a.tent_violations),
                count("slope_violations", a.slope_violations),
                count("sample_violations", a.sample_violations),
                count("t3_without_t2", a.t3_without_t2),
                count("exhausted", a.exhausted),
                count("fav", a.fav),
                base.row(
                    "t3_frequency",
                    frame.t(),
                    a.t3_frequency(),
                    (a.t3_frequency() * (1.0 - a.t3_frequency()) / a.samples.max(1) as f64).sqrt(),
                    kv(&[
                        ("samples", a.samples as f64),
                        ("mean_attempts", a.mean_attempts),
                        ("log_t3_bound", a.log_t3_bound),
                        ("max_poles", a.max_poles as f64),
                    ]),
                ),
            ])
        }
        "oracle" => {
            let g = *frame.grid();
            let depth = cfg.f64_or("floor_level", -1.5)?;
            let floor = SampledPath::from_fn(g, |x| depth - 0.5 * x * x)?;
            let u = cfg.list_or("u", &staircase(p.k, 1.0).iter().map(|v| v - 0.5).collect::<Vec<_>>())?;
            let v = cfg.list_or("v", &u)?;
            let x = cfg.f64_or("x", 0.0)?;
            let o = jump_vs_avoiding(&frame, &floor, &u, &v, x, p.contexts, seed, p.max_attempts)?;
            Ok(vec![base.row(
                "ks",
                x,
                o.ks,
                f64::NAN,
                kv(&[("ks_threshold", o.threshold), ("mean_direct", mean(&o.direct)), ("mean_jump", mean(&o.resampled))]),
            )])
        }
        other => invalid(format!("unknown mode {other:?} (audit or oracle)")),
    }
}

// ------------------------------------------------------------ check-regularity

/// Top curve of the scaled Dyson ensemble at each `z`, from one `GUE_n(1)`
/// draw rescaled by `√t` (the one-point laws are exact).
pub fn dyson_top_values(n: usize, zs: &[f64], rng: &mut RngStream) -> Result<Vec<f64>> {
    let nf = n as f64;
    let lambda = sample_gue(n, 1.0, rng)?.eigenvalues()?[0];
    zs.iter()
        .map(|&z| {
            let t = nf + 2.0 * nf.powf(2.0 / 3.0) * z;
            if !(t > 0.0) {
                return invalid(format!("z = {z} is left of the domain"));
            }
            Ok(scale_value(n, z, t.sqrt() * lambda))
        })
        .collect()
}

pub fn dyson_regularity(
    n: usize,
    zs: &[f64],
    s_lower: &[f64],
    s_upper: &[f64],
    params: RegularityParams,
    trials: u64,
    seed: u64,
) -> Result<RegularityReport> {
    check_regularity(
        n,
        ScaledEnsemble::left_endpoint(n),
        |rng| dyson_top_values(n, zs, rng),
        params,
        zs,
        (s_lower, s_upper),
        trials,
        seed,
        TAG_REGULARITY,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeTail {
    /// Eigenvalue index (1 = largest).
    pub k: usize,
    /// `P(λ_k ≤ 1 - t)` per `t`.
    pub lower: Vec<EstimateReport>,
    pub fit: Option<LineFit>,
}

/// Lower tails of the top eigenvalues of `GUE_n(1/(4n))`, whose edge sits at 1.
pub fn gue_edge_tails(n: usize, ks: &[usize], ts: &[f64], trials: u64, seed: u64) -> Result<Vec<EdgeTail>> {
    let kmax = ks.iter().copied().max().unwrap_or(0);
    if ks.contains(&0) || kmax > n {
        return invalid(format!("eigenvalue indices must lie in 1..={n}"));
    }
    let ev = run_trials(seed, TAG_EDGE, trials, |rng| {
        Ok(sample_gue(n, 1.0 / (4.0 * n as f64), rng)?.eigenvalues()?[..kmax].to_vec())
    })?;
    let thresholds: Vec<f64> = ts.iter().map(|t| 1.0 - t).collect();
    ks.iter()
        .map(|&k| {
            let xs: Vec<f64> = ev.iter().map(|v| v[k - 1]).collect();
            let lower: Vec<EstimateReport> = tail_reports("edge_lower", &xs, &thresholds, Tail::Lower, 0, seed)?
                .into_iter()
                .zip(ts)
                .map(|(r, &t)| r.with_param("t", t))
                .collect();
            let fit = fit_tail_decay(ts, &lower).ok();
            Ok(EdgeTail { k, lower, fit })
        })
        .collect()
}

fn fit_extra(f: &Option<LineFit>) -> String {
    match f {
        Some(f) => kv(&[("slope", f.slope), ("r_squared", f.r_squared)]),
        None => "fit=none".into(),
    }
}

pub fn check_regularity_cmd(cfg: &Config) -> Result<Vec<CsvRow>> {
    let seed = cfg.u64_or("seed", 1)?;
    match cfg.str_or("source", "dyson") {
        "dyson" => {
            let n = cfg.usize_or("n", 30)?;
            let trials = cfg.u64_or("trials", 100_000)?;
            let zs = cfg.list_or("zs", &[-1.0, 0.0, 1.0])?;
            let s_lower = cfg.list_or("s_lower", &[1.0, 1.5, 2.0, 2.5])?;
            let s_upper = cfg.list_or("s_upper", &[0.0, 0.125, 0.25, 0.5])?;
            let params = RegularityParams {
                phi: [cfg.f64_or("phi1", 1.0 / 3.0)?, cfg.f64_or("phi2", 1.0 / 9.0)?, cfg.f64_or("phi3", 1.0 / 3.0)?],
                c: cfg.f64_or("c", 0.5)?,
            };
            let rep = dyson_regularity(n, &zs, &s_lower, &s_upper, params, trials, seed)?;
            let base = RowBase { experiment: "check-regularity", seed, n, k: 1, steps: 0, trials };
            let mut rows = vec![base.row(
                "rs1",
                rep.escape_required,
                rep.rs1 as u8 as f64,
                0.0,
                kv(&[("left_endpoint", rep.left_endpoint)]),
            )];
            for p in &rep.points {
                for (tail, reps, fit) in [("lower", &p.lower, &p.lower_fit), ("upper", &p.upper, &p.upper_fit)] {
                    for r in reps.iter() {
                        let s = r.param("s").unwrap_or(f64::NAN);
                        rows.push(base.row(
                            &format!("{tail}_s"),
                            s,
                            r.estimate,
                            r.stderr,
                            kv(&[("z", p.z), ("in_window", p.in_window as u8 as f64)]),
                        ));
                    }
                    rows.push(base.row(&format!("{tail}_fit"), p.z, fit.map_or(f64::NAN, |f| f.slope), fit.map_or(f64::NAN, |f| f.slope_stderr), fit_extra(fit)));
                }
            }
            Ok(rows)
        }
        "gue" => {
            let n = cfg.usize_or("n", 50)?;
            let trials = cfg.u64_or("trials", 40_000)?;
            let ks: Vec<usize> = cfg.list_or("ks", &[1.0, 2.0])?.iter().map(|&k| k as usize).collect();
            let ts = cfg.list_or("ts", &[0.1, 0.12, 0.14, 0.16])?;
            let out = gue_edge_tails(n, &ks, &ts, trials, seed)?;
            let mut rows = Vec::new();
            for e in &out {
                let base = RowBase { experiment: "check-regularity", seed, n, k: e.k, steps: 0, trials };
                for (r, &t) in e.lower.iter().zip(&ts) {
                    rows.push(base.row("edge_lower_t", t, r.estimate, r.stderr, kv(&[("hits", r.hits as f64)])));
                }
                rows.push(base.row(
                    "edge_lower_fit",
                    e.k as f64,
                    e.fit.map_or(f64::NAN, |f| f.slope),
                    e.fit.map_or(f64::NAN, |f| f.slope_stderr),
                    fit_extra(&e.fit),
                ));
            }
            Ok(rows)
        }
        other => invalid(format!("unknown source {other:?} (dyson or gue)")),
    }
}

// -------------------------------------------------------------- bridge-compare

/// Scaled curve `index` (1 = top) of Hermitian Brownian motion on `[K, K+d]`
/// with `cells` steps.
pub fn dyson_window(n: usize, index: usize, big_k: f64, d: f64, cells: usize, rng: &mut RngStream) -> Result<SampledPath> {
    if index == 0 || index > n {
        return invalid(format!("curve index must lie in 1..={n}"));
    }
    let nf = n as f64;
    let n23 = nf.powf(2.0 / 3.0);
    let t0 = nf + 2.0 * n23 * big_k;
    if !(t0 > 0.0) {
        return invalid(format!("K = {big_k} is left of the domain"));
    }
    let xg = TimeGrid::new(big_k, big_k + d, cells)?;
    let tg = TimeGrid::new(t0, nf + 2.0 * n23 * (big_k + d), cells)?;
    let p = hbm_eigen_process(n, tg, rng)?;
    SampledPath::new(xg, (0..=cells).map(|i| scale_value(n, xg.time(i), p.value(index - 1, i))).collect())
}

#[allow(clippy::too_many_arguments)]
pub fn dyson_bridge_compare(
    n: usize,
    index: usize,
    big_k: f64,
    d: f64,
    cells: usize,
    ss: &[f64],
    trials: u64,
    seed: u64,
    cell_correction: bool,
) -> Result<Vec<BridgeComparison>> {
    bridge_compare_tail(
        "dyson_window",
        |rng| dyson_window(n, index, big_k, d, cells, rng),
        d,
        ss,
        trials,
        seed,
        TAG_BRIDGE,
        cell_correction.then_some(1.0),
    )
}

pub fn bridge_compare(cfg: &Config) -> Result<Vec<CsvRow>> {
    let seed = cfg.u64_or("seed", 1)?;
    let n = cfg.usize_or("n", 30)?;
    let k = cfg.usize_or("k", 1)?;
    let big_k = cfg.f64_or("big_k", 0.0)?;
    let d = cfg.f64_or("d", 1.0)?;
    let cells = cfg.usize_or("steps", 50)?;
    let trials = cfg.u64_or("trials", 5000)?;
    let ss = cfg.list_or("ss", &[1.0, 1.5, 2.0])?;
    let corr = cfg.bool_or("correction", true)?;
    let out = dyson_bridge_compare(n, k, big_k, d, cells, &ss, trials, seed, corr)?;
    let base = RowBase { experiment: "bridge-compare", seed, n, k, steps: cells, trials };
    Ok(out
        .iter()
        .map(|c| {
            base.row(
                "s",
                c.s,
                c.report.estimate,
                c.report.stderr,
                kv(&[("baseline", c.baseline), ("ratio", c.ratio), ("bracket_lo", c.bracket.0), ("bracket_hi", c.bracket.1)]),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mclab::render_csv;

    fn cfg(pairs: &[(&str, &str)]) -> Config {
        let mut c = Config::new();
        for (k, v) in pairs {
            c.set(k, v);
        }
        c
    }

    #[test]
    fn every_experiment_runs_small() {
        let small: &[(&str, &[(&str, &str)])] = &[
            ("simulate-lpp", &[("n", "3"), ("steps", "20"), ("trials", "50"), ("refine", "1"), ("k", "2")]),
            ("simulate-dyson", &[("n", "3"), ("steps", "10"), ("trials", "50")]),
            ("estimate-close", &[("trials", "2000"), ("steps", "16")]),
            ("estimate-neargeod", &[("trials", "500"), ("rs", "0.5,1,1.5,2")]),
            ("estimate-neargeod", &[("trials", "200"), ("source", "lpp"), ("steps", "40"), ("rs", "1,2,3")]),
            ("check-km", &[("trials", "500"), ("steps", "20")]),
            ("check-gibbs", &[("trials", "100"), ("steps", "8")]),
            ("jump-demo", &[("trials", "5"), ("t", "1"), ("spacing", "0.1")]),
            ("jump-demo", &[("trials", "20"), ("t", "1"), ("spacing", "0.1"), ("mode", "oracle")]),
            ("check-regularity", &[("n", "10"), ("trials", "200")]),
            ("check-regularity", &[("source", "gue"), ("n", "10"), ("trials", "200")]),
            ("bridge-compare", &[("n", "5"), ("steps", "10"), ("trials", "50")]),
        ];
        for (name, pairs) in small {
            let rows = run(name, &cfg(pairs)).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(!rows.is_empty(), "{name}");
            assert!(rows.iter().all(|r| r.experiment == *name));
        }
        assert!(run("nope", &Config::new()).is_err());
    }

    #[test]
    fn same_seed_same_rows() {
        let c = cfg(&[("trials", "3000"), ("steps", "16")]);
        assert_eq!(render_csv(&estimate_close(&c).unwrap()), render_csv(&estimate_close(&c).unwrap()));
    }

    #[test]
    fn deficit_is_nonnegative() {
        let mut rng = RngStream::new(3, 0);
        for _ in 0..50 {
            assert!(sample_deficit(NearGeodSource::Gue, 6, 3, 0.2, &mut rng).unwrap() >= 0.0);
        }
        assert!(sample_deficit(NearGeodSource::Gue, 6, 1, 0.0, &mut rng).is_err());
    }

    #[test]
    fn dyson_values_match_scaling_at_zero() {
        let zs = [0.0];
        let v = dyson_top_values(8, &zs, &mut RngStream::new(9, 1)).unwrap()[0];
        let lambda = sample_gue(8, 1.0, &mut RngStream::new(9, 1)).unwrap().eigenvalues().unwrap()[0];
        assert!((v - scale_value(8, 0.0, 8f64.sqrt() * lambda)).abs() < 1e-12);
    }

    #[test]
    fn dyson_window_has_requested_shape() {
        let p = dyson_window(6, 1, 0.5, 1.0, 12, &mut RngStream::new(1, 2)).unwrap();
        assert_eq!(p.grid().steps(), 12);
        assert!((p.grid().a() - 0.5).abs() < 1e-15 && (p.grid().b() - 1.5).abs() < 1e-12);
        assert!(dyson_window(6, 7, 0.0, 1.0, 12, &mut RngStream::new(1, 2)).is_err());
    }
}
