use hoskip::analysis::closed_form::*;
use hoskip::analysis::*;
use hoskip::{db_to_linear, NetworkParams, QuadratureSettings};
use proptest::prelude::*;

fn q() -> QuadratureSettings<f64> {
    QuadratureSettings::default()
}

fn grid(n: usize, lo_db: f64, hi_db: f64) -> Vec<f64> {
    (0..n)
        .map(|i| db_to_linear(lo_db + (hi_db - lo_db) * i as f64 / (n - 1) as f64))
        .collect()
}

#[test]
fn coverage_bounded_monotone_and_ordered() {
    let p = NetworkParams::<f64>::default();
    let mut prev = [f64::INFINITY; 3];
    for t in grid(100, -20.0, 30.0) {
        let c = coverage_connected(t, &p, &q()).unwrap();
        let b = coverage_blackout(t, &p, &q()).unwrap();
        let ic = coverage_blackout_ic(t, 4.0, &q()).unwrap();
        for (i, v) in [c, b, ic].into_iter().enumerate() {
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= prev[i] + 1e-12, "not monotone at T={t}");
            prev[i] = v;
        }
        assert!(b <= ic && ic <= c, "ordering at T={t}");
    }
}

#[test]
fn general_eta_monotone() {
    let p = NetworkParams::<f64>::default()
        .with_eta(3.0)
        .with_noise(1e-4)
        .with_lambda(5.0);
    let mut prev = f64::INFINITY;
    for t in grid(25, -10.0, 20.0) {
        let c = coverage_connected(t, &p, &q()).unwrap();
        assert!(c <= prev);
        prev = c;
    }
}

#[test]
fn intensity_invariance_without_noise() {
    for t in grid(7, -10.0, 20.0) {
        let reference = [
            coverage_connected_eta4(t),
            coverage_blackout_eta4(t),
            coverage_blackout_ic_eta4(t),
        ];
        for lambda in [1.0, 10.0, 100.0] {
            let p = NetworkParams::default().with_lambda(lambda);
            let got = [
                coverage_connected(t, &p, &q()).unwrap(),
                coverage_blackout(t, &p, &q()).unwrap(),
                coverage_blackout_ic_with_noise(t, &p, &q()).unwrap(),
            ];
            for (g, r) in got.iter().zip(reference) {
                assert!(((g - r) / r).abs() < 1e-6, "λ={lambda} T={t}");
            }
        }
    }
}

#[test]
fn spectral_efficiencies_match_reported_values() {
    let eff = spectral_efficiencies(&NetworkParams::<f64>::default(), &q()).unwrap();
    assert!((eff.connected - 1.49).abs() <= 0.02);
    assert!((eff.blackout - 0.21).abs() <= 0.02);
    assert!((eff.blackout_ic - 0.66).abs() <= 0.02);
    assert!((eff.for_scheme(HoScheme::SkippingIC) - 1.07).abs() <= 0.02);
    assert!((eff.for_scheme(HoScheme::Skipping) - 0.85).abs() <= 0.02);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outer_transform_dual_path(t in 1e-3..1e3f64, lambda in 0.1..200.0f64, r0 in 0.0..0.5f64) {
        let a = laplace_interference_outer(t, 4.0, r0, lambda, &q()).unwrap();
        let b = laplace_outer_eta4(t, r0, lambda);
        prop_assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn skipped_transform_r0_free(t in 1e-3..1e3f64, eta in 2.1..6.0f64, r0 in 1e-3..1e3f64) {
        let a = laplace_interference_skipped(t, eta, r0, &q()).unwrap();
        let b = laplace_interference_skipped(t, eta, 1.0, &q()).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a > 0.0 && a <= 1.0);
    }

    #[test]
    fn vartheta_increases_with_threshold(t in 1e-3..1e3f64, eta in 2.2..6.0f64) {
        let a = vartheta(t, eta, &q()).unwrap();
        let b = vartheta(t * 1.5, eta, &q()).unwrap();
        prop_assert!(b > a && a > 0.0);
    }

    #[test]
    fn skipping_cost_is_exactly_half(v in 0.0..400.0f64, lambda in 0.1..500.0f64, d in 0.0..5.0f64) {
        let conv = ho_cost(HoScheme::Conventional, v, lambda, d).unwrap().fraction;
        for s in [HoScheme::Skipping, HoScheme::SkippingIC] {
            prop_assert_eq!(ho_cost(s, v, lambda, d).unwrap().fraction, conv / 2.0);
        }
    }

    #[test]
    fn skipping_efficiency_is_exact_mean(a in 0.0..5.0f64, b in 0.0..5.0f64) {
        prop_assert_eq!(spectral_efficiency_skipping(a, b).unwrap(), (a + b) / 2.0);
    }

    #[test]
    fn pointwise_larger_coverage_has_larger_efficiency(scale in 0.1..0.95f64) {
        let big = spectral_efficiency(|t| Ok(coverage_connected_eta4(t)), &q()).unwrap();
        let small = spectral_efficiency(|t| Ok(scale * coverage_connected_eta4(t)), &q()).unwrap();
        prop_assert!(small < big);
    }
}
