use crate::error::{invalid, Error, Result};
use crate::stochastic::{SampledPath, TimeGrid};

/// `Q(x) = x² / √2`.
pub fn parabola_q(x: f64) -> f64 {
    x * x * std::f64::consts::FRAC_1_SQRT_2
}

/// Tangent line to `-Q` at `y`, evaluated at `x`: `-y²/√2 - √2 y (x - y)`.
pub fn tangent_l(x: f64, y: f64) -> f64 {
    -y * y * std::f64::consts::FRAC_1_SQRT_2 - std::f64::consts::SQRT_2 * y * (x - y)
}

/// `L(i, x + y) - l(x + y, y)` on the grid shifted by `-y`. Requires `y`
/// inside the common domain, so the shifted ensemble still covers the origin.
pub fn parabolic_shift(curves: &[SampledPath], y: f64) -> Result<Vec<SampledPath>> {
    let Some(first) = curves.first() else {
        return invalid("empty ensemble");
    };
    let g = *first.grid();
    if curves.iter().any(|c| !c.grid().matches(&g)) {
        return Err(Error::GridMismatch("ensemble curves use different grids".into()));
    }
    if !(y.is_finite() && g.a() <= y && y <= g.b()) {
        return invalid(format!("shift {y} leaves the domain [{}, {}]", g.a(), g.b()));
    }
    let shifted = TimeGrid::new(g.a() - y, g.b() - y, g.steps())?;
    Ok(curves
        .iter()
        .map(|c| {
            let vals = (0..g.len()).map(|i| c.at(i) - tangent_l(g.time(i), y)).collect();
            SampledPath::new(shifted, vals).expect("finite values")
        })
        .collect())
}

/// Largest `|E(i, x') - E(i, x)|` over curves `i < k` and gridpoints
/// `a ≤ x < x' ≤ b` with `x' - x ≤ δ`.
pub fn modulus_of_continuity(curves: &[SampledPath], k: usize, (a, b): (f64, f64), delta: f64) -> Result<f64> {
    if k == 0 || k > curves.len() {
        return invalid(format!("need 1 <= k <= {}", curves.len()));
    }
    if !(a < b) || !(delta > 0.0) || delta > b - a {
        return invalid(format!("need 0 < δ <= b - a; got δ = {delta} on [{a}, {b}]"));
    }
    let g = *curves[0].grid();
    if curves[..k].iter().any(|c| !c.grid().matches(&g)) {
        return Err(Error::GridMismatch("ensemble curves use different grids".into()));
    }
    let tol = 1e-9 * g.h();
    let i0 = (0..g.len()).find(|&i| g.time(i) >= a - tol).unwrap_or(g.len());
    let i1 = (0..g.len()).rev().find(|&i| g.time(i) <= b + tol).unwrap_or(0);
    if i0 >= i1 {
        return Ok(0.0);
    }
    let lag = ((delta + tol) / g.h()).floor() as usize;
    let mut best = 0.0f64;
    for c in &curves[..k] {
        let v = c.values();
        for i in i0..i1 {
            for j in i + 1..=(i + lag).min(i1) {
                best = best.max((v[j] - v[i]).abs());
            }
        }
    }
    Ok(best)
}
