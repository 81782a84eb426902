use super::{max_energy_profile, BrownianField};
use crate::error::{invalid, Result};
use crate::stochastic::{SampledPath, TimeGrid};

/// Curves `L_n(i, ·)` with `Σ_{i<ℓ} L_n(i, t) = M^ℓ_n(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LppLineEnsemble {
    curves: Vec<SampledPath>,
    partial_sums: Vec<Vec<f64>>,
}

impl LppLineEnsemble {
    pub fn curves(&self) -> &[SampledPath] {
        &self.curves
    }

    pub fn curve(&self, i: usize) -> &SampledPath {
        &self.curves[i]
    }

    pub fn n(&self) -> usize {
        self.curves.len()
    }

    pub fn grid(&self) -> &TimeGrid {
        self.curves[0].grid()
    }

    /// `M^ℓ` profile (ℓ ≥ 1) as computed by the dynamic program.
    pub fn max_energy(&self, ell: usize) -> &[f64] {
        &self.partial_sums[ell - 1]
    }
}

/// `L_n(ℓ, t) = M^ℓ_n(t) − M^{ℓ−1}_n(t)` for all ℓ ≤ n.
pub fn line_ensemble(field: &BrownianField) -> Result<LppLineEnsemble> {
    let n = field.n();
    let mut partial_sums = Vec::with_capacity(n);
    for ell in 1..=n {
        partial_sums.push(max_energy_profile(field, ell)?);
    }
    let zeros = vec![0.0; field.grid().len()];
    let curves = (0..n)
        .map(|i| {
            let prev = if i == 0 { &zeros } else { &partial_sums[i - 1] };
            let vals = partial_sums[i].iter().zip(prev).map(|(m, p)| m - p).collect();
            SampledPath::from_parts_unchecked(*field.grid(), vals)
        })
        .collect();
    Ok(LppLineEnsemble { curves, partial_sums })
}

/// KPZ scaling `2^{-1/2} n^{-1/3} (L − 2n − 2n^{2/3} x)` of one value.
pub fn scale_value(n: usize, x: f64, l: f64) -> f64 {
    let nf = n as f64;
    let n13 = nf.cbrt();
    std::f64::consts::FRAC_1_SQRT_2 / n13 * (l - 2.0 * nf - 2.0 * n13 * n13 * x)
}

/// Scaled curves `𝓛^sc_n(i, x)` on an `x`-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledEnsemble {
    n: usize,
    curves: Vec<SampledPath>,
}

impl ScaledEnsemble {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn curves(&self) -> &[SampledPath] {
        &self.curves
    }

    pub fn curve(&self, i: usize) -> &SampledPath {
        &self.curves[i]
    }

    pub fn grid(&self) -> &TimeGrid {
        self.curves[0].grid()
    }

    /// Left end `−n^{1/3}/2` of the scaled domain (time 0 before scaling).
    pub fn left_endpoint(n: usize) -> f64 {
        -(n as f64).cbrt() / 2.0
    }
}

/// Applies the KPZ scaling to any family of curves in `t` (LPP or Dyson),
/// sampling the result on `x_grid` with `t = n + 2n^{2/3} x`.
pub fn scale(curves: &[SampledPath], n: usize, x_grid: TimeGrid) -> Result<ScaledEnsemble> {
    if curves.is_empty() {
        return invalid("no curves to scale");
    }
    let left = ScaledEnsemble::left_endpoint(n);
    if x_grid.a() < left - 1e-12 {
        return invalid(format!("x = {} lies below the scaled domain start {left}", x_grid.a()));
    }
    let nf = n as f64;
    let n23 = nf.powf(2.0 / 3.0);
    let scaled = curves
        .iter()
        .map(|c| {
            let vals = x_grid
                .times()
                .map(|x| {
                    let t = (nf + 2.0 * n23 * x).max(0.0);
                    c.eval(t).map(|l| scale_value(n, x, l))
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(SampledPath::from_parts_unchecked(x_grid, vals))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaledEnsemble { n, curves: scaled })
}

/// `Σ_{i=2}^k (𝓛(1, x) − 𝓛(i, x))`; near-geodesic event iff this is ≤ `2^{-1/2} r`.
pub fn near_geod_deficit(scaled: &ScaledEnsemble, k: usize, x: f64) -> Result<f64> {
    if k < 2 {
        return invalid("deficit needs k >= 2");
    }
    if k > scaled.curves.len() {
        return invalid(format!("k = {k} exceeds the {} available curves", scaled.curves.len()));
    }
    let top = scaled.curves[0].eval(x)?;
    let mut sum = 0.0;
    for c in &scaled.curves[1..k] {
        sum += top - c.eval(x)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::RngStream;

    #[test]
    fn one_line_ensemble_is_the_motion() {
        let g = TimeGrid::new(0.0, 1.0, 16).unwrap();
        let f = BrownianField::sample(1, g, &mut RngStream::new(8, 0)).unwrap();
        let e = line_ensemble(&f).unwrap();
        assert_eq!(e.curve(0).values(), f.row(0));
    }

    #[test]
    fn partial_sums_reproduce_max_energy_exactly() {
        let g = TimeGrid::new(0.0, 3.0, 30).unwrap();
        let f = BrownianField::sample(4, g, &mut RngStream::new(8, 1)).unwrap();
        let e = line_ensemble(&f).unwrap();
        for ell in 1..=4 {
            let m = max_energy_profile(&f, ell).unwrap();
            for i in 0..g.len() {
                let s: f64 = (0..ell).map(|q| e.curve(q).at(i)).sum();
                assert_eq!(s, m[i]);
            }
        }
    }

    #[test]
    fn scale_arithmetic() {
        let v = scale_value(5, 0.0, 10.7);
        let want = 2f64.powf(-0.5) * 5f64.powf(-1.0 / 3.0) * 0.7;
        assert!((v - want).abs() < 1e-14);
        let n = 8usize;
        let x = 0.37;
        let on = 2.0 * 8.0 + 2.0 * 4.0 * x;
        assert!(scale_value(n, x, on).abs() < 1e-14);
        // affine in L with the stated slope
        let slope = scale_value(n, x, 3.0) - scale_value(n, x, 2.0);
        assert!((slope - 2f64.powf(-0.5) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn scale_rejects_domain_underflow() {
        let g = TimeGrid::new(0.0, 16.0, 32).unwrap();
        let c = vec![SampledPath::constant(g, 0.0)];
        assert!(scale(&c, 8, TimeGrid::new(-1.5, 0.0, 3).unwrap()).is_err());
        assert!(scale(&c, 8, TimeGrid::new(-1.0, 0.0, 3).unwrap()).is_ok());
        assert!(scale(&c, 8, TimeGrid::new(0.0, 3.0, 3).unwrap()).is_err());
    }

    #[test]
    fn deficit_cases() {
        let g = TimeGrid::new(-0.5, 0.5, 2).unwrap();
        let mk = |v: f64| SampledPath::constant(g, v);
        let flat = ScaledEnsemble { n: 3, curves: vec![mk(1.0), mk(1.0), mk(1.0)] };
        assert_eq!(near_geod_deficit(&flat, 3, 0.0).unwrap(), 0.0);
        let e = ScaledEnsemble { n: 3, curves: vec![mk(1.0), mk(0.25), mk(-1.0)] };
        assert_eq!(near_geod_deficit(&e, 2, 0.0).unwrap(), 0.75);
        assert_eq!(near_geod_deficit(&e, 3, 0.0).unwrap(), 2.75);
        assert!(near_geod_deficit(&e, 1, 0.0).is_err());
        assert!(near_geod_deficit(&e, 4, 0.0).is_err());
    }
}
