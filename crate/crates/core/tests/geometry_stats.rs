use hoskip::geometry::{k_nearest_distances, sample_ppp, Point2, PointPattern};
use proptest::prelude::*;

#[test]
fn mean_count_matches_poisson_mean() {
    let (lambda, radius) = (30.0_f64, 2.0);
    let n = 10_000u64;
    let total: usize = (0..n).map(|s| sample_ppp(lambda, radius, s).unwrap().len()).sum();
    let mean = total as f64 / n as f64;
    let expected = lambda * std::f64::consts::PI * radius * radius;
    let se = (expected / n as f64).sqrt();
    assert!(
        (mean - expected).abs() < 3.0 * se,
        "mean {mean} vs {expected} (se {se})"
    );
}

#[test]
fn nearest_distance_cdf_passes_ks() {
    let lambda = 30.0_f64;
    let n = 10_000;
    let mut d: Vec<f64> = (0..n)
        .map(|s| k_nearest_distances(&sample_ppp(lambda, 2.0, 1_000_000 + s).unwrap(), Point2::origin(), 1).unwrap()[0])
        .collect();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cdf = |r: f64| 1.0 - (-lambda * std::f64::consts::PI * r * r).exp();
    let ks = d
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let f = cdf(r);
            (f - i as f64 / n as f64)
                .abs()
                .max(((i + 1) as f64 / n as f64 - f).abs())
        })
        .fold(0.0, f64::max);
    // Asymptotic 1 % critical value.
    let critical = 1.628 / (n as f64).sqrt();
    assert!(ks < critical, "KS {ks} >= {critical}");
}

#[test]
fn nearest_over_second_nearest_squared_has_mean_half() {
    let n = 10_000;
    let ratios: Vec<f64> = (0..n)
        .map(|s| {
            let d = k_nearest_distances(&sample_ppp(10.0_f64, 3.0, 77 + s).unwrap(), Point2::origin(), 2).unwrap();
            (d[0] / d[1]).powi(2)
        })
        .collect();
    let mean = ratios.iter().sum::<f64>() / n as f64;
    let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    let se = (var / n as f64).sqrt();
    assert!((mean - 0.5).abs() < 3.0 * se, "mean {mean} (se {se})");
}

fn pattern_from(coords: &[(f64, f64)]) -> PointPattern<f64> {
    PointPattern {
        points: coords.iter().map(|&(x, y)| Point2::new(x, y)).collect(),
        window_radius: 10.0,
        intensity: 1.0,
        seed: 0,
    }
}

proptest! {
    #[test]
    fn k_nearest_matches_full_sort(
        coords in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 3..60),
        ox in -2.0..2.0f64,
        oy in -2.0..2.0f64,
        k in 1usize..3,
    ) {
        let p = pattern_from(&coords);
        let origin = Point2::new(ox, oy);
        let mut brute: Vec<f64> = coords.iter().map(|&(x, y)| ((x - ox).powi(2) + (y - oy).powi(2)).sqrt()).collect();
        brute.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let got = k_nearest_distances(&p, origin, k).unwrap();
        prop_assert_eq!(got.len(), k);
        for (g, b) in got.iter().zip(&brute) {
            prop_assert!((g - b).abs() < 1e-12);
        }
        prop_assert!(got.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn k_nearest_is_permutation_invariant(
        coords in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 4..40),
        shift in 0usize..40,
    ) {
        let mut rotated = coords.clone();
        let len = rotated.len();
        rotated.rotate_left(shift % len);
        rotated.reverse();
        let a = k_nearest_distances(&pattern_from(&coords), Point2::origin(), 3).unwrap();
        let b = k_nearest_distances(&pattern_from(&rotated), Point2::origin(), 3).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn samples_stay_in_window(lambda in 0.5..50.0f64, radius in 0.2..3.0f64, seed in any::<u64>()) {
        let p = sample_ppp(lambda, radius, seed).unwrap();
        prop_assert!(p.points.iter().all(|q| q.norm2().sqrt() <= radius * (1.0 + 1e-12)));
        prop_assert_eq!(p.seed, seed);
    }
}
