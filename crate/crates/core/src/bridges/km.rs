use nalgebra::DMatrix;

use super::{BridgeEnsembleSpec, DecreasingList};
use crate::error::{invalid, Error, Result};

/// Karlin–McGregor non-touching probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmValue {
    pub probability: f64,
    /// Smallest over largest LU pivot magnitude of the normalised matrix.
    pub pivot_ratio: f64,
    /// Set when the pivot ratio suggests severe cancellation.
    pub ill_conditioned: bool,
}

const ILL_CONDITIONED_PIVOT_RATIO: f64 = 1e-12;

/// `det(h(x_i, y_j)) / Π h(x_i, y_i)` with `h` the Gaussian kernel over `b − a`.
///
/// Row `i` is divided by its largest entry before factorisation (in the log
/// domain for `k ≥ 6`, where raw entries underflow).
pub fn km_avoidance(spec: &BridgeEnsembleSpec) -> Result<KmValue> {
    if spec.floor.is_finite() {
        return invalid("the determinant formula needs floor = −∞");
    }
    if !spec.entrance.is_strict() || !spec.exit.is_strict() {
        return invalid("entrance and exit must be strictly decreasing");
    }
    let x = spec.entrance.values();
    let y = spec.exit.values();
    let k = x.len();
    if k == 1 {
        return Ok(KmValue { probability: 1.0, pivot_ratio: 1.0, ill_conditioned: false });
    }
    let tau = spec.grid.b() - spec.grid.a();
    // log h(x_i, y_j) − log h(x_i, y_i)
    let expo = |i: usize, j: usize| -((y[j] - x[i]).powi(2) - (y[i] - x[i]).powi(2)) / (2.0 * tau);
    let row_max: Vec<f64> =
        (0..k).map(|i| (0..k).map(|j| expo(i, j)).fold(f64::NEG_INFINITY, f64::max)).collect();
    let m = if k >= 6 {
        DMatrix::from_fn(k, k, |i, j| (expo(i, j) - row_max[i]).exp())
    } else {
        DMatrix::from_fn(k, k, |i, j| expo(i, j).exp() / row_max[i].exp())
    };
    let lu = m.lu();
    let u = lu.u();
    let diag: Vec<f64> = (0..k).map(|i| u[(i, i)]).collect();
    let (lo, hi) = diag
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d.abs()), hi.max(d.abs())));
    let pivot_ratio = if hi > 0.0 { lo / hi } else { 0.0 };
    let det = lu.determinant();
    let log_scale: f64 = row_max.iter().sum();
    let p = if det <= 0.0 { det } else { (det.ln() + log_scale).exp() };
    if !p.is_finite() {
        return Err(Error::Numerical(format!("non-finite determinant for k = {k}")));
    }
    let ill_conditioned = pivot_ratio < ILL_CONDITIONED_PIVOT_RATIO;
    if ill_conditioned {
        log::warn!("Karlin–McGregor determinant ill-conditioned (pivot ratio {pivot_ratio:.2e})");
    }
    Ok(KmValue { probability: p.clamp(0.0, 1.0), pivot_ratio, ill_conditioned })
}

/// Leading term and error bracket for the non-touching probability from
/// entrance `η·(k−1, …, 1, 0)` to `ȳ ⊂ [−K, K]` over an interval of length `ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VandermondeBracket {
    /// `η^{k(k−1)/2} ρ^{−k(k−1)/2} Π_{i<j} |y_i − y_j|`.
    pub leading: f64,
    pub e_lower: f64,
    pub e_upper: f64,
}

impl VandermondeBracket {
    pub fn contains(&self, p: f64) -> bool {
        p >= self.leading * (1.0 + self.e_lower) && p <= self.leading * (1.0 + self.e_upper)
    }
}

pub fn vandermonde_expansion(eta: f64, rho: f64, y: &DecreasingList, big_k: f64) -> Result<VandermondeBracket> {
    let k = y.len();
    let kf = k as f64;
    if !(rho > 0.0 && big_k > 0.0) {
        return invalid("ρ and K must be positive");
    }
    if !(eta > 0.0 && eta < rho / (kf * kf * big_k)) {
        return invalid(format!("η = {eta} outside (0, ρ k⁻² K⁻¹)"));
    }
    if y.values().iter().any(|v| v.abs() > big_k) {
        return invalid("exit data must lie in [−K, K]");
    }
    let pairs = (k * (k - 1) / 2) as i32;
    let vals = y.values();
    let mut prod = 1.0;
    for i in 0..k {
        for j in i + 1..k {
            prod *= (vals[i] - vals[j]).abs();
        }
    }
    let leading = (eta / rho).powi(pairs) * prod;
    let unit = eta / rho * kf * kf * big_k;
    let (e_lower, e_upper) = if k == 1 {
        (0.0, 0.0)
    } else {
        (-2.0 * unit, (std::f64::consts::E.powi(2) - 1.0) * unit)
    };
    Ok(VandermondeBracket { leading, e_lower, e_upper })
}
