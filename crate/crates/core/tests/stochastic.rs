mod common;

use common::{mean_se, var_se};
use lpp_ensembles::stochastic::{
    affine_to_standard, bridge_fdd_density, gaussian_tail_bounds, pinned_conditional_gaussian,
    sample_brownian_bridge, sample_brownian_motion, PinnedQuery,
};
use lpp_ensembles::{RngStream, SampledPath, TimeGrid};
use proptest::prelude::*;

#[test]
fn motion_endpoint_has_unit_variance() {
    let g = TimeGrid::new(0.0, 1.0, 100).unwrap();
    let ends: Vec<f64> = (0..100_000u64)
        .map(|i| sample_brownian_motion(g, 0.0, &mut RngStream::new(1, i)).last())
        .collect();
    let (v, se) = var_se(&ends);
    assert!((v - 1.0).abs() < 3.0 * se, "variance {v} ± {se}");
}

#[test]
fn bridge_midpoint_moments() {
    let g = TimeGrid::new(-1.0, 1.0, 40).unwrap();
    let (x, y) = (0.7, -1.3);
    let mid: Vec<f64> = (0..100_000u64)
        .map(|i| sample_brownian_bridge(g, x, y, &mut RngStream::new(2, i)).at(20))
        .collect();
    let (m, mse) = mean_se(&mid);
    let (v, vse) = var_se(&mid);
    assert!((m - (x + y) / 2.0).abs() < 3.0 * mse, "mean {m}");
    assert!((v - 0.5).abs() < 3.0 * vse, "variance {v}");
}

/// Solves `A β = b` for a small dense system by Gaussian elimination.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for j in c..n {
                a[r][j] -= f * a[c][j];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|j| a[r][j] * x[j]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// The conditional law of a Gaussian vector given linear statistics is the
/// least-squares regression on those statistics; fit it from simulations and
/// compare with the closed form.
#[test]
fn pinned_law_matches_regression_on_simulations() {
    let (l1, a, b, l2) = (0.0, 1.0, 2.0, 3.0);
    let g = TimeGrid::new(l1, l2, 6).unwrap();
    let (ia, ib) = (g.index_of(a).unwrap(), g.index_of(b).unwrap());
    let start = [1.0, -0.5];
    let end = [0.4, -1.0];
    let n = 100_000u64;
    // regressors: 1, jump_1, jump_2, gap; response: B(2, a)
    let mut xtx = vec![vec![0.0; 4]; 4];
    let mut xty = vec![0.0; 4];
    let mut rows = Vec::with_capacity(n as usize);
    for i in 0..n {
        let mut rng = RngStream::new(3, i);
        let c: Vec<SampledPath> = (0..2).map(|q| sample_brownian_bridge(g, start[q], end[q], &mut rng)).collect();
        let x = [1.0, c[0].at(ib) - c[0].at(ia), c[1].at(ib) - c[1].at(ia), c[0].at(ia) - c[1].at(ia)];
        let y = c[1].at(ia);
        for r in 0..4 {
            for s in 0..4 {
                xtx[r][s] += x[r] * x[s];
            }
            xty[r] += x[r] * y;
        }
        rows.push((x, y));
    }
    let beta = solve(xtx.clone(), xty);
    let resid: Vec<f64> = rows.iter().map(|(x, y)| y - (0..4).map(|j| beta[j] * x[j]).sum::<f64>()).collect();
    let (rv, rv_se) = var_se(&resid);

    let jump = [0.3, -0.2];
    let gaps = [0.8, 0.0];
    let law = pinned_conditional_gaussian(&PinnedQuery {
        l1,
        a,
        b,
        l2,
        start: &start,
        end: &end,
        jump: &jump,
        gaps: Some(&gaps),
    })
    .unwrap();
    let x0 = [1.0, jump[0], jump[1], gaps[0] - gaps[1]];
    let pred: f64 = (0..4).map(|j| beta[j] * x0[j]).sum();
    // prediction standard error: sqrt(σ² x0ᵀ (XᵀX)⁻¹ x0)
    let w = solve(xtx, x0.to_vec());
    let pse = (rv * (0..4).map(|j| x0[j] * w[j]).sum::<f64>()).sqrt();
    assert!((pred - law.mean).abs() < 3.0 * pse.max(1e-4), "mean {} vs regression {pred} ± {pse}", law.mean);
    assert!((rv - law.var).abs() < 3.0 * rv_se, "variance {} vs residual {rv} ± {rv_se}", law.var);
}

/// Probability of a box around `z` under the fdd density (midpoint rule)
/// against the empirical frequency.
#[test]
fn two_point_density_matches_sampler() {
    let g = TimeGrid::new(0.0, 1.0, 3).unwrap();
    let times = [g.time(1), g.time(2)];
    let (x, y) = (0.2, -0.4);
    let z = [0.1, -0.1];
    let half = 0.15;
    let m = 40;
    let cell = 2.0 * half / m as f64;
    let mut integral = 0.0;
    for i in 0..m {
        for j in 0..m {
            let v = [z[0] - half + (i as f64 + 0.5) * cell, z[1] - half + (j as f64 + 0.5) * cell];
            integral += bridge_fdd_density((x, y), (0.0, 1.0), &times, &v).unwrap() * cell * cell;
        }
    }
    let n = 200_000u64;
    let hits = (0..n)
        .filter(|&i| {
            let p = sample_brownian_bridge(g, x, y, &mut RngStream::new(4, i));
            (p.at(1) - z[0]).abs() < half && (p.at(2) - z[1]).abs() < half
        })
        .count() as f64;
    let p = hits / n as f64;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((p - integral).abs() < 3.0 * se, "empirical {p} vs integrated density {integral}");
}

#[test]
fn tail_bracket_contains_monte_carlo_tail() {
    let n = 1_000_000u64;
    let mut rng = RngStream::new(5, 0);
    let hits = (0..n).filter(|_| rng.normal() >= 2.0).count() as f64;
    let p = hits / n as f64;
    let tb = gaussian_tail_bounds(2.0).unwrap();
    assert!(tb.lower.unwrap() <= p && p <= tb.upper, "{p} outside [{:?}, {}]", tb.lower, tb.upper);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bridges_hit_their_endpoints(seed in any::<u64>(), x in -5.0f64..5.0, y in -5.0f64..5.0, steps in 1usize..200) {
        let g = TimeGrid::new(-1.0, 2.0, steps).unwrap();
        let p = sample_brownian_bridge(g, x, y, &mut RngStream::new(seed, 0));
        prop_assert_eq!(p.first(), x);
        prop_assert_eq!(p.last(), y);
        let s = affine_to_standard(&p);
        prop_assert_eq!(s.first(), 0.0);
        prop_assert!(s.last().abs() < 1e-12 * (1.0 + x.abs() + y.abs()));
    }

    #[test]
    fn standardisation_removes_any_chord(seed in any::<u64>(), c0 in -3.0f64..3.0, c1 in -3.0f64..3.0) {
        let g = TimeGrid::new(0.0, 1.0, 50).unwrap();
        let p = sample_brownian_motion(g, 0.0, &mut RngStream::new(seed, 1));
        let tilted = SampledPath::new(g, (0..g.len()).map(|i| p.at(i) + c0 + c1 * g.time(i)).collect()).unwrap();
        let (a, b) = (affine_to_standard(&p), affine_to_standard(&tilted));
        for i in 0..g.len() {
            prop_assert!((a.at(i) - b.at(i)).abs() < 1e-9);
        }
    }

    #[test]
    fn streams_are_reproducible(seed in any::<u64>(), idx in 0u64..1 << 40) {
        let mut a = RngStream::new(seed, idx);
        let mut b = RngStream::new(seed, idx);
        for _ in 0..8 {
            prop_assert_eq!(a.normal().to_bits(), b.normal().to_bits());
        }
    }
}
