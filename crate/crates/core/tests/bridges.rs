mod common;

use common::mean_se;
use lpp_ensembles::bridges::{
    km_avoidance, no_touch, sample_avoiding, sample_independent, survival_log_weight, sup_crossing_prob,
    vandermonde_expansion,
};
use lpp_ensembles::mclab::experiments::{gibbs_invariance, km_vs_rejection};
use lpp_ensembles::mclab::cell_exceedance;
use lpp_ensembles::stochastic::sample_brownian_bridge;
use lpp_ensembles::{BridgeEnsembleSpec, CrossingCorrection, DecreasingList, FloorCurve, RngStream, SampledPath, TimeGrid};
use proptest::prelude::*;

#[test]
fn determinant_matches_corrected_rejection() {
    let g = TimeGrid::new(0.0, 1.0, 200).unwrap();
    let spec = BridgeEnsembleSpec::free(g, vec![0.9, -0.2], vec![0.3, -0.6]).unwrap();
    let (km, rep) = km_vs_rejection(&spec, 100_000, 20, CrossingCorrection::On).unwrap();
    assert!(rep.z_score(km.probability) < 3.5, "KM {} vs {} ± {}", km.probability, rep.estimate, rep.stderr);
}

#[test]
fn raising_the_floor_only_removes_samples() {
    let g = TimeGrid::new(0.0, 2.0, 50).unwrap();
    let base = SampledPath::new(g, (0..g.len()).map(|i| -1.0 - 0.3 * g.time(i)).collect()).unwrap();
    let low = FloorCurve::linear(base);
    let high = low.raised(0.6);
    let entrance = DecreasingList::strict(vec![1.0, 0.0]).unwrap();
    let exit = DecreasingList::strict(vec![0.5, -0.5]).unwrap();
    let spec = BridgeEnsembleSpec::new(g, entrance.clone(), exit.clone(), high.clone()).unwrap();
    let (mut acc_low, mut acc_high) = (0, 0);
    for i in 0..20_000u64 {
        let curves = sample_independent(&spec, &mut RngStream::new(21, i));
        let l = no_touch(&curves, &low, None).unwrap();
        let h = no_touch(&curves, &high, None).unwrap();
        assert!(!h || l, "sample {i} avoids the raised floor but not the lower one");
        acc_low += l as u32;
        acc_high += h as u32;
    }
    assert!(acc_high < acc_low);

    // stochastic monotonicity of the bottom curve
    let mid = |floor: &FloorCurve| {
        let s = BridgeEnsembleSpec::new(g, entrance.clone(), exit.clone(), floor.clone()).unwrap();
        let v: Vec<f64> = (0..20_000u64)
            .map(|i| sample_avoiding(&s, &mut RngStream::new(22, i), 10_000, CrossingCorrection::On).unwrap().0[1].at(25))
            .collect();
        mean_se(&v)
    };
    let ((ml, sl), (mh, sh)) = (mid(&low), mid(&high));
    assert!(mh > ml - 3.0 * (sl * sl + sh * sh).sqrt(), "bottom curve mean {mh} under raised floor vs {ml}");
}

#[test]
fn cell_weights_recover_one_sided_sup_law() {
    let g = TimeGrid::new(0.0, 1.0, 1000).unwrap();
    let r = 0.5;
    let v: Vec<f64> = (0..20_000u64)
        .map(|i| cell_exceedance(&sample_brownian_bridge(g, 0.0, 0.0, &mut RngStream::new(23, i)), Some(r), None, 1.0))
        .collect();
    let (m, se) = mean_se(&v);
    let want = sup_crossing_prob(0.0, r, 0.0, 1.0);
    assert!((want - (-0.5f64).exp()).abs() < 1e-15);
    assert!((m - want).abs() < 3.0 * se, "{m} ± {se} vs {want}");
}

#[test]
fn gibbs_resampling_preserves_marginal() {
    let g = TimeGrid::new(-1.0, 1.0, 40).unwrap();
    let spec = BridgeEnsembleSpec::free(g, vec![2.0, 0.0, -2.0], vec![2.0, 0.0, -2.0]).unwrap();
    for curve in [0, 1] {
        let c = gibbs_invariance(&spec, 2, (-0.5, 0.5), curve, 0.0, 10_000, 24, 10_000, CrossingCorrection::On)
            .unwrap();
        assert!(c.ks < c.threshold, "curve {curve}: KS {} over {}", c.ks, c.threshold);
    }
}

#[test]
fn small_spacing_sits_in_vandermonde_bracket() {
    let rho = 1.0;
    let y = DecreasingList::strict(vec![0.8, 0.1, -0.5]).unwrap();
    for eta in [1e-3, 5e-3, 2e-2] {
        let br = vandermonde_expansion(eta, rho, &y, 1.0).unwrap();
        let spec = BridgeEnsembleSpec::free(TimeGrid::new(0.0, rho, 4).unwrap(), vec![2.0 * eta, eta, 0.0], y.values().to_vec())
            .unwrap();
        let p = km_avoidance(&spec).unwrap().probability;
        assert!(br.contains(p), "η = {eta}: {p} outside {br:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn km_is_a_probability(x0 in 0.05f64..3.0, x1 in 0.05f64..3.0, y0 in 0.05f64..3.0, y1 in 0.05f64..3.0, len in 0.1f64..5.0) {
        let g = TimeGrid::new(0.0, len, 4).unwrap();
        let spec = BridgeEnsembleSpec::free(g, vec![x0 + x1, x1, 0.0], vec![y0 + y1, y1, 0.0]).unwrap();
        let p = km_avoidance(&spec).unwrap().probability;
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn survival_weight_is_a_log_probability(seed in any::<u64>(), gap in 0.1f64..3.0) {
        let g = TimeGrid::new(0.0, 1.0, 30).unwrap();
        let floor = FloorCurve::linear(SampledPath::constant(g, -gap));
        let spec = BridgeEnsembleSpec::new(
            g,
            DecreasingList::strict(vec![gap, 0.0]).unwrap(),
            DecreasingList::strict(vec![gap, 0.0]).unwrap(),
            floor.clone(),
        ).unwrap();
        let curves = sample_independent(&spec, &mut RngStream::new(seed, 0));
        if no_touch(&curves, &floor, None).unwrap() {
            let w = survival_log_weight(&curves, &floor, 0, g.steps());
            prop_assert!(w <= 0.0);
        }
    }
}
