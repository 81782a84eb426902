/// `P(sup B ≥ h + r)` for a bridge pinned at `h` on both ends of `[a, b]`
/// (equally `P(inf B ≤ h − r)`); independent of `h`.
pub fn sup_crossing_prob(_h: f64, r: f64, a: f64, b: f64) -> f64 {
    (-2.0 * r * r / (b - a)).exp()
}

/// Probability that a bridge of diffusion coefficient `diffusion`, at distance
/// `g0` and `g1 > 0` from a barrier at the two ends of a cell of length `dt`,
/// hits the barrier inside the cell. Non-positive gaps count as a hit.
pub fn cell_crossing_prob(g0: f64, g1: f64, dt: f64, diffusion: f64) -> f64 {
    if !(g0 > 0.0 && g1 > 0.0) {
        return 1.0;
    }
    (-2.0 * g0 * g1 / (diffusion * dt)).exp()
}

/// `P(sup |B| ≥ s)` for a standard bridge on `[0, 1]`:
/// `2 Σ_{j≥1} (−1)^{j−1} e^{−2 j² s²}`.
pub fn kolmogorov_two_sided(s: f64) -> f64 {
    // below 0.2 the value is 1 to double precision
    if s < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..200 {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * s * s).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_values() {
        assert!((sup_crossing_prob(0.0, 1.0, 0.0, 1.0) - (-2.0f64).exp()).abs() < 1e-16);
        assert!((sup_crossing_prob(3.0, 1e-9, 0.0, 1.0) - 1.0).abs() < 1e-12);
        assert_eq!(sup_crossing_prob(3.0, 1.0, 0.0, 2.0), sup_crossing_prob(-1.0, 1.0, 5.0, 7.0));
    }

    #[test]
    fn one_cell_crossing_is_sup_formula() {
        // barrier at h + r for a bridge pinned at h: gaps r and r, diffusion 1
        let p = cell_crossing_prob(0.5, 0.5, 1.0, 1.0);
        assert!((p - sup_crossing_prob(0.0, 0.5, 0.0, 1.0)).abs() < 1e-16);
        assert_eq!(cell_crossing_prob(0.0, 0.5, 1.0, 1.0), 1.0);
        assert_eq!(cell_crossing_prob(0.3, -0.1, 1.0, 1.0), 1.0);
    }

    #[test]
    fn kolmogorov_bracket() {
        for s in [0.5, 0.8, 1.0, 1.5, 2.0] {
            let p = kolmogorov_two_sided(s);
            let e = (-2.0 * s * s).exp();
            assert!(p >= e && p <= 2.0 * e, "s = {s}");
        }
        assert!((kolmogorov_two_sided(1.0) - 0.2699996716735).abs() < 1e-9);
    }
}
