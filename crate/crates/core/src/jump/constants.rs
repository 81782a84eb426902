use crate::error::{invalid, Result};

/// Constants derived from the regularity parameters `(c, C)` for a curve index `k`.
///
/// Large-`k` values of `C_j` overflow `f64`, so they are also kept as logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityConstants {
    k: usize,
    c: f64,
    big_c: f64,
    little: Vec<f64>,
    log_big: Vec<f64>,
    d_k: f64,
}

const C_RATIO_BASE: f64 = 3.0 - 2.828_427_124_746_190_3;

/// Ratio `c_j / c_{j-1}`.
pub fn little_c_ratio() -> f64 {
    C_RATIO_BASE.powf(1.5) * 10f64.powf(-1.5)
}

fn log_big_c(j: usize, c: f64, big_c: f64) -> f64 {
    if j == 1 {
        return big_c.ln();
    }
    let jf = j as f64;
    let poly = 10f64.ln()
        + (jf - 1.0) * 20f64.ln()
        + 0.5 * jf * 5f64.ln()
        + 0.5 * jf * (jf - 1.0) * (10.0 / C_RATIO_BASE).ln()
        + big_c.ln();
    poly.max(c / 2.0)
}

/// Evaluates `c_j` for `j ≤ k`, `C_j` for `j ≤ k` (with `C_1 = C`) and the
/// default `D_k`.
pub fn regularity_constants(k: usize, c: f64, big_c: f64) -> Result<RegularityConstants> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    if !(c > 0.0 && big_c > 0.0 && c.is_finite() && big_c.is_finite()) {
        return invalid(format!("need positive finite c, C; got ({c}, {big_c})"));
    }
    let c1 = (2f64.powf(-2.5) * c).min(0.125);
    let ratio = little_c_ratio();
    let little: Vec<f64> = (0..k).map(|j| c1 * ratio.powi(j as i32)).collect();
    let log_big = (1..=k).map(|j| log_big_c(j, c, big_c)).collect();
    let ck = little[k - 1];
    let kf = k as f64;
    let d_k = (ck.powf(-1.0 / 3.0) * (2f64.powf(-4.5) - 2f64.powi(-5)).powf(-1.0 / 3.0))
        .max(36.0 * (kf * kf - 1.0));
    Ok(RegularityConstants { k, c, big_c, little, log_big, d_k })
}

impl RegularityConstants {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> (f64, f64) {
        (self.c, self.big_c)
    }

    /// `c_j`, `1 ≤ j ≤ k`.
    pub fn little_c(&self, j: usize) -> f64 {
        self.little[j - 1]
    }

    /// `C_j`, `1 ≤ j ≤ k`; may be `inf` for large `j`.
    pub fn big_c(&self, j: usize) -> f64 {
        self.log_big[j - 1].exp()
    }

    pub fn log_big_c(&self, j: usize) -> f64 {
        self.log_big[j - 1]
    }

    pub fn d_k(&self) -> f64 {
        self.d_k
    }

    /// Replaces `D_k` by a larger value.
    pub fn with_d_k(mut self, d: f64) -> Result<Self> {
        if !(d >= self.d_k) || !d.is_finite() {
            return invalid(format!("D_k may only be increased (default {}, got {d})", self.d_k));
        }
        self.d_k = d;
        Ok(self)
    }

    /// `T = D_k (log 1/ε)^{1/3}`.
    pub fn window(&self, eps: f64) -> f64 {
        self.d_k * (-eps.ln()).cbrt()
    }

    /// The `ε` giving window `T`.
    pub fn epsilon_for_window(&self, t: f64) -> f64 {
        (-(t / self.d_k).powi(3)).exp()
    }

    /// `log` of `18^{-3/2} C_k^{-3/2} D_k^{-3/2}`.
    pub fn log_epsilon_cap_constants(&self) -> f64 {
        -1.5 * (18f64.ln() + self.log_big[self.k - 1] + self.d_k.ln())
    }

    /// `log` of `exp(-2·10^7 k^{3/2} d_ip^6)`.
    pub fn log_epsilon_cap_poles(&self, d_ip: f64) -> f64 {
        -2e7 * (self.k as f64).powf(1.5) * d_ip.powi(6)
    }

    /// Logarithm of the lower bound `exp(-3973 k^{7/2} d_ip² D_k² (log 1/ε)^{2/3})`
    /// on the probability that a jump ensemble sample passes the middle test.
    pub fn log_t3_bound(&self, eps: f64, d_ip: f64) -> f64 {
        -3973.0 * (self.k as f64).powf(3.5) * d_ip * d_ip * self.d_k * self.d_k * (-eps.ln()).powf(2.0 / 3.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c1_min_rule() {
        let small = regularity_constants(1, 0.1, 1.0).unwrap();
        assert_eq!(small.little_c(1), 2f64.powf(-2.5) * 0.1);
        let big = regularity_constants(1, 10.0, 1.0).unwrap();
        assert_eq!(big.little_c(1), 0.125);
    }

    #[test]
    fn geometric_little_c() {
        let rc = regularity_constants(6, 0.7, 2.0).unwrap();
        for j in 2..=6 {
            let r = rc.little_c(j) / rc.little_c(j - 1);
            assert!((r - little_c_ratio()).abs() < 1e-14);
        }
    }

    #[test]
    fn d2_at_least_108() {
        for &c in &[0.01, 0.5, 1.0, 100.0] {
            let rc = regularity_constants(2, c, 1.0).unwrap();
            assert!(rc.d_k() >= 108.0);
        }
        assert!(regularity_constants(2, 1.0, 1.0).unwrap().with_d_k(50.0).is_err());
        assert_eq!(regularity_constants(2, 1.0, 1.0).unwrap().with_d_k(500.0).unwrap().d_k(), 500.0);
    }

    #[test]
    fn big_c_direct_small_k() {
        let rc = regularity_constants(3, 1.0, 2.0).unwrap();
        let base = 3.0 - 2f64.powf(1.5);
        let want2 = (10.0 * 20.0 * 5.0 * (10.0 / base) * 2.0f64).max(0.5f64.exp());
        let want3 = (10.0 * 400.0 * 5f64.powf(1.5) * (10.0 / base).powi(3) * 2.0f64).max(0.5f64.exp());
        assert!((rc.big_c(2) / want2 - 1.0).abs() < 1e-12);
        assert!((rc.big_c(3) / want3 - 1.0).abs() < 1e-12);
        assert_eq!(rc.big_c(1), 2.0);
        let huge_c = regularity_constants(2, 1e6, 1.0).unwrap();
        assert!((huge_c.log_big_c(2) - 5e5).abs() < 1e-9);
    }

    #[test]
    fn window_roundtrip() {
        let rc = regularity_constants(2, 1.0, 1.0).unwrap();
        let eps = rc.epsilon_for_window(1.5);
        assert!((rc.window(eps) - 1.5).abs() < 1e-9);
        assert!(rc.log_epsilon_cap_constants() < 0.0);
    }
}
