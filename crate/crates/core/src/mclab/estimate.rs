use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::stochastic::{stream_id, RngStream};

/// Minimum number of hits for an estimate to enter a log-scale fit.
pub const MIN_HITS: u64 = 25;

/// Runs `trials` independent trials, trial `i` on stream `(seed, stream_id(tag, i))`.
/// Results come back in trial order, so any reduction over them is deterministic.
pub fn run_trials<T, F>(seed: u64, tag: u16, trials: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream) -> Result<T> + Sync,
{
    let out: Vec<Result<T>> = (0..trials)
        .into_par_iter()
        .map(|i| f(&mut RngStream::new(seed, stream_id(tag, i))))
        .collect();
    out.into_iter().collect()
}

/// A Monte Carlo probability estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub label: String,
    pub params: Vec<(String, f64)>,
    pub trials: u64,
    /// Trials with a non-zero contribution.
    pub hits: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub ci: (f64, f64),
    pub steps: usize,
    pub seed: u64,
}

impl EstimateReport {
    /// Mean of per-trial values in `[0, 1]` (indicators or conditional
    /// probabilities); the standard error uses the population variance, which
    /// for indicators equals `p̂(1-p̂)`.
    pub fn from_values(label: impl Into<String>, values: &[f64], steps: usize, seed: u64) -> Result<Self> {
        if values.is_empty() {
            return invalid("an estimate needs at least one trial");
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let second = values.iter().map(|v| v * v).sum::<f64>() / n;
        let var = (second - mean * mean).max(0.0);
        let stderr = (var / n).sqrt();
        let hits = values.iter().filter(|&&v| v > 0.0).count() as u64;
        Ok(Self {
            label: label.into(),
            params: Vec::new(),
            trials: values.len() as u64,
            hits,
            estimate: mean,
            stderr,
            ci: (mean - 1.96 * stderr, mean + 1.96 * stderr),
            steps,
            seed,
        })
    }

    pub fn from_hits(label: impl Into<String>, hits: u64, trials: u64, steps: usize, seed: u64) -> Result<Self> {
        if trials == 0 {
            return invalid("an estimate needs at least one trial");
        }
        let p = hits as f64 / trials as f64;
        let stderr = (p * (1.0 - p) / trials as f64).sqrt();
        Ok(Self {
            label: label.into(),
            params: Vec::new(),
            trials,
            hits,
            estimate: p,
            stderr,
            ci: (p - 1.96 * stderr, p + 1.96 * stderr),
            steps,
            seed,
        })
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.push((name.to_string(), value));
        self
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    /// `|p̂ - p| / stderr` (infinite if the stderr vanishes and `p̂ ≠ p`).
    pub fn z_score(&self, p: f64) -> f64 {
        let d = (self.estimate - p).abs();
        if d == 0.0 { 0.0 } else { d / self.stderr }
    }
}

/// Which side of a threshold counts as a hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// `X >= t`
    Upper,
    /// `X <= t`
    Lower,
}

/// One report per threshold for a scalar statistic; each trial draws one value
/// that is compared against every threshold.
pub fn estimate_tail<F>(
    label: &str,
    statistic: F,
    thresholds: &[f64],
    tail: Tail,
    trials: u64,
    seed: u64,
    tag: u16,
) -> Result<Vec<EstimateReport>>
where
    F: Fn(&mut RngStream) -> Result<f64> + Sync,
{
    if trials < 100 {
        return invalid(format!("need at least 100 trials, got {trials}"));
    }
    let xs = run_trials(seed, tag, trials, statistic)?;
    tail_reports(label, &xs, thresholds, tail, 0, seed)
}

/// Tail reports from already drawn samples.
pub fn tail_reports(
    label: &str,
    xs: &[f64],
    thresholds: &[f64],
    tail: Tail,
    steps: usize,
    seed: u64,
) -> Result<Vec<EstimateReport>> {
    thresholds
        .iter()
        .map(|&t| {
            let hits = xs
                .iter()
                .filter(|&&x| match tail {
                    Tail::Upper => x >= t,
                    Tail::Lower => x <= t,
                })
                .count() as u64;
            Ok(EstimateReport::from_hits(label, hits, xs.len() as u64, steps, seed)?.with_param("threshold", t))
        })
        .collect()
}

/// Ordinary least squares of `y` on `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
}

pub fn ols(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let m = x.len();
    if m != y.len() || m < 2 {
        return invalid("ols needs at least two paired points");
    }
    let mf = m as f64;
    let mx = x.iter().sum::<f64>() / mf;
    let my = y.iter().sum::<f64>() / mf;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if !(sxx > 0.0) {
        return invalid("ols needs at least two distinct abscissae");
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let slope_stderr = if m > 2 { (rss / (mf - 2.0) / sxx).sqrt() } else { f64::NAN };
    let r_squared = if syy > 0.0 { 1.0 - rss / syy } else { 1.0 };
    Ok(LineFit { slope, intercept, slope_stderr, r_squared })
}

/// Power-law fit `p ≈ A x^slope` on log-log scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub xs: Vec<f64>,
    pub log_p: Vec<f64>,
    /// Which input points entered the fit.
    pub used: Vec<bool>,
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
}

/// Fits estimates against their abscissae, using only points with at least
/// [`MIN_HITS`] hits.
pub fn fit_exponent(xs: &[f64], reports: &[EstimateReport]) -> Result<ExponentFit> {
    if xs.len() != reports.len() {
        return invalid("abscissae and reports differ in length");
    }
    if let Some(r) = reports.iter().find(|r| !(r.estimate > 0.0)) {
        return invalid(format!(
            "estimate for {:?} is zero: use more trials or larger abscissae",
            r.params
        ));
    }
    let used: Vec<bool> = reports.iter().map(|r| r.hits >= MIN_HITS).collect();
    let ps: Vec<f64> = reports.iter().map(|r| r.estimate).collect();
    fit_masked(xs, &ps, used)
}

/// Exact log-log fit of positive values (no hit filtering).
pub fn fit_power_law(xs: &[f64], ps: &[f64]) -> Result<ExponentFit> {
    if ps.iter().any(|p| !(*p > 0.0)) {
        return invalid("power-law fit needs positive values");
    }
    fit_masked(xs, ps, vec![true; xs.len()])
}

fn fit_masked(xs: &[f64], ps: &[f64], used: Vec<bool>) -> Result<ExponentFit> {
    if xs.iter().any(|x| !(*x > 0.0)) {
        return invalid("abscissae must be positive");
    }
    let (lx, ly): (Vec<f64>, Vec<f64>) =
        xs.iter().zip(ps).zip(&used).filter(|(_, &u)| u).map(|((x, p), _)| (x.ln(), p.ln())).unzip();
    if lx.len() < 3 {
        return invalid(format!("only {} points have enough hits; need 3", lx.len()));
    }
    let fit = ols(&lx, &ly)?;
    if !fit.slope_stderr.is_finite() {
        return Err(Error::Numerical("non-finite slope stderr".into()));
    }
    Ok(ExponentFit {
        xs: xs.to_vec(),
        log_p: ps.iter().map(|p| p.ln()).collect(),
        used,
        slope: fit.slope,
        intercept: fit.intercept,
        slope_stderr: fit.slope_stderr,
        r_squared: fit.r_squared,
    })
}

/// Regression of `-log p̂` on `s^{3/2}` over the points with enough hits.
pub fn fit_tail_decay(s: &[f64], reports: &[EstimateReport]) -> Result<LineFit> {
    let (x, y): (Vec<f64>, Vec<f64>) = s
        .iter()
        .zip(reports)
        .filter(|(_, r)| r.hits >= MIN_HITS)
        .map(|(&s, r)| (s.powf(1.5), -r.estimate.ln()))
        .unzip();
    if x.len() < 3 {
        return invalid(format!("only {} tail points have enough hits; need 3", x.len()));
    }
    ols(&x, &y)
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Asymptotic 5% critical value of the two-sample statistic.
pub fn ks_threshold(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.358 * ((n + m) / (n * m)).sqrt()
}

/// One-sample distance against a continuous CDF.
pub fn ks_one_sample(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = xs.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_event() {
        let r = estimate_tail("c", |_| Ok(1.0), &[0.5], Tail::Upper, 200, 1, 0).unwrap();
        assert_eq!((r[0].estimate, r[0].stderr), (1.0, 0.0));
        assert!(estimate_tail("c", |_| Ok(1.0), &[0.5], Tail::Upper, 0, 1, 0).is_err());
    }

    #[test]
    fn normal_median() {
        let r = estimate_tail("n", |rng| Ok(rng.normal()), &[0.0], Tail::Upper, 20_000, 2, 0).unwrap();
        assert!(r[0].z_score(0.5) < 3.0);
        let s = (0.25f64 / 20_000.0).sqrt();
        assert!((r[0].stderr - s).abs() < 1e-4);
        assert!((r[0].ci.1 - r[0].estimate - 1.96 * r[0].stderr).abs() < 1e-15);
    }

    #[test]
    fn deterministic_across_runs() {
        let f = |rng: &mut RngStream| Ok(rng.normal());
        let a = run_trials(5, 3, 500, f).unwrap();
        let b = run_trials(5, 3, 500, f).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exact_power_law() {
        let xs = [0.05, 0.1, 0.2, 0.4];
        let ps: Vec<f64> = xs.iter().map(|x: &f64| x.powi(3)).collect();
        let fit = fit_power_law(&xs, &ps).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-12);
    }

    #[test]
    fn zero_estimate_is_an_error() {
        let reps: Vec<_> = [10, 0, 40].iter().map(|&h| EstimateReport::from_hits("x", h, 1000, 0, 0).unwrap()).collect();
        assert!(fit_exponent(&[1.0, 2.0, 3.0], &reps).is_err());
    }

    #[test]
    fn hit_filter() {
        let reps: Vec<_> =
            [5, 30, 240, 810].iter().map(|&h| EstimateReport::from_hits("x", h, 1000, 0, 0).unwrap()).collect();
        let fit = fit_exponent(&[0.5, 1.0, 2.0, 3.0], &reps).unwrap();
        assert_eq!(fit.used, vec![false, true, true, true]);
        assert!(fit.slope > 0.0);
    }

    #[test]
    fn ks_basics() {
        assert_eq!(ks_two_sample(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        assert!((ks_two_sample(&[1.0, 3.0], &[2.0, 4.0]) - 0.5).abs() < 1e-15);
        assert!((ks_threshold(100, 100) - 1.358 * 0.02f64.sqrt()).abs() < 1e-15);
        let u: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((ks_one_sample(&u, |x| x) - 0.005).abs() < 1e-12);
    }
}
