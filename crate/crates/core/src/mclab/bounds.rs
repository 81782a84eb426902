use crate::error::{invalid, Result};
use crate::jump::little_c_ratio;

/// Names accepted by [`named_bound`], with their parameters.
pub const BOUND_NAMES: &[(&str, &[&str])] = &[
    ("dip", &["k", "r"]),
    ("gue_lower_tail", &["c_big", "c", "n", "eps"]),
    ("gue_upper_tail", &["c_big", "c", "n", "t"]),
    ("curve_lower_tail", &["h_big", "h", "n", "t"]),
    ("bridge_closeness", &["k", "phi"]),
    ("modulus_weak", &["eps", "big_k"]),
    ("bridge_modulus", &["r", "delta"]),
    ("lower_curve_inf", &["t", "r", "k", "c", "c_big"]),
];

/// Evaluates a closed-form tail bound. Existential constants (`c_big`, `c`,
/// `h_big`, `h`) are supplied by the caller.
///
/// * `dip`: `(1 - 2/e)^{-k} e^{-4r²}`
/// * `gue_lower_tail`, `gue_upper_tail`, `curve_lower_tail`: `C exp(-c n x^{3/2})`
/// * `bridge_closeness`: `4258 · 36^{k²} (k²-1)^{k²} φ^{k²-1} (log 1/φ)^{k²/2}`
/// * `modulus_weak`: `ε^{K²/18432}`
/// * `bridge_modulus`: `3 exp(-R²/(1152 δ))`
/// * `lower_curve_inf`: `t^k E_k exp(-c_k r^{3/2})`, `E_k = 20^{k-1} 2^{k(k-1)/2} · 10 C`
pub fn named_bound(name: &str, params: &[(&str, f64)]) -> Result<f64> {
    let Some((_, needed)) = BOUND_NAMES.iter().find(|(n, _)| *n == name) else {
        return invalid(format!("unknown bound {name:?}"));
    };
    let get = |key: &str| -> Result<f64> {
        match params.iter().find(|(k, _)| *k == key) {
            Some(&(_, v)) if v.is_finite() => Ok(v),
            Some(_) => invalid(format!("parameter {key} of {name} is not finite")),
            None => invalid(format!("bound {name} needs parameters {needed:?}")),
        }
    };
    let tail = |c_big: &str, c: &str, x: &str| -> Result<f64> {
        Ok(get(c_big)? * (-get(c)? * get("n")? * get(x)?.powf(1.5)).exp())
    };
    let value = match name {
        "dip" => {
            let k = get("k")?;
            let r = get("r")?;
            (1.0 - 2.0 * (-1f64).exp()).powf(-k) * (-4.0 * r * r).exp()
        }
        "gue_lower_tail" => tail("c_big", "c", "eps")?,
        "gue_upper_tail" => tail("c_big", "c", "t")?,
        "curve_lower_tail" => tail("h_big", "h", "t")?,
        "bridge_closeness" => {
            let k = get("k")?;
            let phi = get("phi")?;
            if !(phi > 0.0 && phi < 1.0) {
                return invalid("bridge_closeness needs 0 < phi < 1");
            }
            let k2 = k * k;
            let log = 4258f64.ln() + k2 * 36f64.ln() + k2 * (k2 - 1.0).ln() + (k2 - 1.0) * phi.ln()
                + 0.5 * k2 * (-phi.ln()).ln();
            log.exp()
        }
        "modulus_weak" => get("eps")?.powf(get("big_k")?.powi(2) / 18432.0),
        "bridge_modulus" => 3.0 * (-get("r")?.powi(2) / (1152.0 * get("delta")?)).exp(),
        "lower_curve_inf" => {
            let (t, r, k, c, c_big) = (get("t")?, get("r")?, get("k")?, get("c")?, get("c_big")?);
            let e_k = 20f64.powf(k - 1.0) * 2f64.powf(k * (k - 1.0) / 2.0) * 10.0 * c_big;
            let c1 = (2f64.powf(-2.5) * c).min(0.125);
            let c_k = little_c_ratio().powf(k - 1.0) * c1;
            t.powf(k) * e_k * (-c_k * r.powf(1.5)).exp()
        }
        _ => unreachable!("name checked above"),
    };
    Ok(value)
}
