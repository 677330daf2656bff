//! Poisson point patterns in a disk and nearest-point queries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<R> {
    pub x: R,
    pub y: R,
}

impl<R: Real> Point2<R> {
    pub fn new(x: R, y: R) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(R::zero(), R::zero())
    }

    #[inline]
    pub fn dist2(&self, other: &Self) -> R {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn dist(&self, other: &Self) -> R {
        self.dist2(other).sqrt()
    }

    #[inline]
    pub fn norm2(&self) -> R {
        self.x * self.x + self.y * self.y
    }
}

/// One realization of a homogeneous PPP restricted to a disk centred at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern<R> {
    pub points: Vec<Point2<R>>,
    /// km
    pub window_radius: R,
    /// BS per km²
    pub intensity: R,
    /// Seed that produced `points`.
    pub seed: u64,
}

impl<R: Real> PointPattern<R> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Mean point count of the generating process.
    pub fn expected_count(&self) -> R {
        self.intensity * R::PI() * self.window_radius * self.window_radius
    }
}

/// Window radius used when the caller does not choose one: `max(2, 15/√λ)` km.
pub fn default_window_radius<R: Real>(intensity: R) -> R {
    R::lit(2.0).max(R::lit(15.0) / intensity.sqrt())
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-work-unit seed derived from a master seed; independent of scheduling order.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws a PPP of the given intensity on the disk of radius `window_radius`.
pub fn sample_ppp<R: Real>(intensity: R, window_radius: R, seed: u64) -> Result<PointPattern<R>> {
    if !(intensity > R::zero()) || !intensity.is_finite() {
        return Err(Error::invalid(
            "intensity",
            format!("must be positive, got {intensity}"),
        ));
    }
    if !(window_radius > R::zero()) || !window_radius.is_finite() {
        return Err(Error::invalid(
            "window_radius",
            format!("must be positive, got {window_radius}"),
        ));
    }
    let mut rng = rng_from_seed(seed);
    let mean = (intensity * R::PI() * window_radius * window_radius).as_f64();
    let poisson = Poisson::new(mean).map_err(|e| Error::invalid("intensity", e.to_string()))?;
    let count = poisson.sample(&mut rng) as usize;

    let radius = window_radius.as_f64();
    let points = (0..count)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            Point2::new(R::lit(r * theta.cos()), R::lit(r * theta.sin()))
        })
        .collect();

    Ok(PointPattern {
        points,
        window_radius,
        intensity,
        seed,
    })
}

/// Samples until the pattern has at least `min_points`, bumping the seed each retry.
/// Returns the pattern and the number of resamples performed.
pub fn sample_ppp_with_min_points<R: Real>(
    intensity: R,
    window_radius: R,
    seed: u64,
    min_points: usize,
) -> Result<(PointPattern<R>, u32)> {
    const MAX_RESAMPLES: u32 = 1000;
    for attempt in 0..=MAX_RESAMPLES {
        let s = if attempt == 0 {
            seed
        } else {
            derive_seed(seed, u64::from(attempt))
        };
        let pattern = sample_ppp(intensity, window_radius, s)?;
        if pattern.len() >= min_points {
            return Ok((pattern, attempt));
        }
    }
    Err(Error::WindowTooSmall(format!(
        "no realization with {min_points} points after {MAX_RESAMPLES} resamples"
    )))
}

/// Indices and distances of the `k` points closest to `origin`, ascending.
/// Ties are broken by point index.
pub fn k_nearest<R: Real>(pattern: &PointPattern<R>, origin: Point2<R>, k: usize) -> Result<Vec<(usize, R)>> {
    let n = pattern.len();
    if n < k {
        return Err(Error::InsufficientPoints {
            requested: k,
            available: n,
        });
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut all: Vec<(usize, R)> = pattern
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| (i, p.dist2(&origin)))
        .collect();
    let by_dist = |a: &(usize, R), b: &(usize, R)| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0));
    if k < n {
        all.select_nth_unstable_by(k - 1, by_dist);
        all.truncate(k);
    }
    all.sort_unstable_by(by_dist);
    Ok(all.into_iter().map(|(i, d2)| (i, d2.sqrt())).collect())
}

/// Distances to the `k` points closest to `origin`, ascending.
pub fn k_nearest_distances<R: Real>(pattern: &PointPattern<R>, origin: Point2<R>, k: usize) -> Result<Vec<R>> {
    Ok(k_nearest(pattern, origin, k)?.into_iter().map(|(_, d)| d).collect())
}

/// Indices of the nearest and second-nearest points, in a single pass.
pub(crate) fn two_nearest<R: Real>(dist2: &[R]) -> Option<(usize, usize)> {
    if dist2.len() < 2 {
        return None;
    }
    let (mut a, mut b) = if dist2[1] < dist2[0] { (1, 0) } else { (0, 1) };
    for (i, &d) in dist2.iter().enumerate().skip(2) {
        if d < dist2[a] {
            b = a;
            a = i;
        } else if d < dist2[b] {
            b = i;
        }
    }
    Some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern(points: &[(f64, f64)]) -> PointPattern<f64> {
        PointPattern {
            points: points.iter().map(|&(x, y)| Point2::new(x, y)).collect(),
            window_radius: 10.0,
            intensity: 1.0,
            seed: 0,
        }
    }

    #[test]
    fn hand_geometry() {
        let p = pattern(&[(1.0, 0.0), (0.0, 2.0), (3.0, 0.0)]);
        assert_eq!(k_nearest_distances(&p, Point2::origin(), 2).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn coincident_point() {
        let p = pattern(&[(0.0, 0.0)]);
        assert_eq!(k_nearest_distances(&p, Point2::origin(), 1).unwrap(), vec![0.0]);
    }

    #[test]
    fn insufficient_points() {
        let p = pattern(&[(1.0, 1.0)]);
        assert_eq!(
            k_nearest_distances(&p, Point2::origin(), 2),
            Err(Error::InsufficientPoints {
                requested: 2,
                available: 1
            })
        );
    }

    #[test]
    fn ties_break_by_index() {
        let p = pattern(&[(0.0, 1.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 3.0)]);
        let idx: Vec<usize> = k_nearest(&p, Point2::origin(), 3)
            .unwrap()
            .into_iter()
            .map(|(i, _)| i)
            .collect();
        assert_eq!(idx, vec![0, 1, 2]);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            sample_ppp(0.0_f64, 1.0, 1),
            Err(Error::InvalidParameter { name: "intensity", .. })
        ));
        assert!(matches!(
            sample_ppp(1.0_f64, -1.0, 1),
            Err(Error::InvalidParameter {
                name: "window_radius",
                ..
            })
        ));
    }

    #[test]
    fn deterministic_and_inside_window() {
        let a = sample_ppp(30.0_f64, 2.0, 42).unwrap();
        let b = sample_ppp(30.0_f64, 2.0, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.points.iter().all(|p| p.norm2().sqrt() <= 2.0));
        assert_ne!(a, sample_ppp(30.0_f64, 2.0, 43).unwrap());
    }

    #[test]
    fn vanishing_intensity_is_empty() {
        let empty = (0..200)
            .filter(|&s| sample_ppp(1e-9_f64, 1.0, s).unwrap().is_empty())
            .count();
        assert_eq!(empty, 200);
    }

    #[test]
    fn resampling_counts_retries() {
        // mean count ≈ 0.03: almost always empty on the first draw
        let (p, retries) = sample_ppp_with_min_points(0.01_f64, 1.0, 7, 1).unwrap();
        assert!(!p.is_empty());
        assert!(retries > 0);
    }

    #[test]
    fn default_radius_rule() {
        assert_eq!(default_window_radius(1.0_f64), 15.0);
        assert_eq!(default_window_radius(100.0_f64), 2.0);
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(9, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }

    #[test]
    fn two_nearest_matches_sort() {
        let d = [5.0, 3.0, 9.0, 1.0, 4.0];
        assert_eq!(two_nearest(&d), Some((3, 1)));
        assert_eq!(two_nearest(&[1.0]), None);
    }
}
