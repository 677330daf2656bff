use rand::Rng;
use rayon::prelude::*;

use crate::analysis::{HoScheme, NetworkParams};
use crate::error::{Error, Result};
use crate::geometry::{default_window_radius, derive_seed, rng_from_seed, sample_ppp, Point2, PointPattern};
use crate::scalar::Real;

const SECONDS_PER_HOUR: f64 = 3600.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkState {
    /// Served by the nearest BS.
    Connected,
    /// Inside a skipped cell, still served by the previous BS.
    Blackout,
    /// Handover signalling towards the (nearest) target BS; no data.
    InHandover,
}

/// Stretch of the trajectory inside one Voronoi cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellVisit<R> {
    /// Index of the cell's BS in the trace's pattern.
    pub bs: usize,
    pub enter_km: R,
    pub exit_km: R,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<R> {
    pub start_km: R,
    pub end_km: R,
    pub start_s: R,
    pub end_s: R,
    pub serving: usize,
    /// BS whose cell contains the segment.
    pub cell_bs: usize,
    pub state: LinkState,
}

/// One straight-line pass through a fixed PPP under a handover scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryTrace<R> {
    pub scheme: HoScheme,
    pub params: NetworkParams<R>,
    pub velocity_kmh: R,
    pub length_km: R,
    pub start: Point2<R>,
    /// Unit heading.
    pub direction: Point2<R>,
    pub pattern: PointPattern<R>,
    pub cells: Vec<CellVisit<R>>,
    pub segments: Vec<Segment<R>>,
    /// Executed handovers.
    pub handovers: usize,
}

impl<R: Real> TrajectoryTrace<R> {
    /// Cell-boundary crossings along the path.
    pub fn crossings(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn total_distance_km(&self) -> R {
        self.length_km
    }

    pub fn duration_s(&self) -> R {
        self.length_km / self.velocity_kmh * R::lit(SECONDS_PER_HOUR)
    }

    pub fn position_at(&self, s_km: R) -> Point2<R> {
        Point2::new(
            self.start.x + self.direction.x * s_km,
            self.start.y + self.direction.y * s_km,
        )
    }

    pub fn distance_in(&self, state: LinkState) -> R {
        self.segments
            .iter()
            .filter(|s| s.state == state)
            .fold(R::zero(), |acc, s| acc + (s.end_km - s.start_km))
    }

    /// Share of the path spent in skipped cells.
    pub fn blackout_fraction(&self) -> R {
        self.distance_in(LinkState::Blackout) / self.length_km
    }

    /// Segment covering arc length `s_km`.
    pub fn segment_at(&self, s_km: R) -> Option<&Segment<R>> {
        let idx = self.segments.partition_point(|seg| seg.end_km <= s_km);
        self.segments.get(idx).filter(|seg| seg.start_km <= s_km)
    }
}

fn point_segment_dist2<R: Real>(p: &Point2<R>, start: &Point2<R>, dir: &Point2<R>, length: R) -> R {
    let s = ((p.x - start.x) * dir.x + (p.y - start.y) * dir.y)
        .max(R::zero())
        .min(length);
    p.dist2(&Point2::new(start.x + dir.x * s, start.y + dir.y * s))
}

fn nearest_among<R: Real>(points: &[Point2<R>], candidates: &[usize], at: &Point2<R>) -> (usize, R) {
    candidates
        .iter()
        .map(|&i| (i, points[i].dist2(at)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)))
        .expect("non-empty candidate set")
}

/// Walks the line through the Voronoi cells of `candidates`, returning cell visits.
///
/// Leaving cell `a` at arc length `s`, the next cell is the candidate `b` heading
/// towards which (`dir·(b − a) > 0`) has the earliest bisector crossing.
fn walk_cells<R: Real>(
    points: &[Point2<R>],
    candidates: &[usize],
    start: Point2<R>,
    dir: Point2<R>,
    length: R,
) -> Vec<CellVisit<R>> {
    let two = R::lit(2.0);
    let mut current = nearest_among(points, candidates, &start).0;
    let mut s_cur = R::zero();
    let mut cells = Vec::new();

    for _ in 0..=candidates.len() {
        let a = points[current];
        let a2 = a.norm2();
        let mut next: Option<(usize, R)> = None;
        for &j in candidates {
            if j == current {
                continue;
            }
            let b = points[j];
            let diff = Point2::new(b.x - a.x, b.y - a.y);
            let denom = dir.x * diff.x + dir.y * diff.y;
            if !(denom > R::zero()) {
                continue;
            }
            let numer = b.norm2() - a2 - two * (start.x * diff.x + start.y * diff.y);
            let s = (numer / (two * denom)).max(s_cur);
            let better = match next {
                None => true,
                Some((k, sk)) => s < sk || (s == sk && j < k),
            };
            if better {
                next = Some((j, s));
            }
        }
        match next {
            Some((j, s)) if s < length => {
                cells.push(CellVisit {
                    bs: current,
                    enter_km: s_cur,
                    exit_km: s,
                });
                current = j;
                s_cur = s;
            }
            _ => break,
        }
    }
    cells.push(CellVisit {
        bs: current,
        enter_km: s_cur,
        exit_km: length,
    });
    cells
}

/// Largest nearest-BS distance along the path, attained at a cell boundary or endpoint.
fn max_service_distance<R: Real>(points: &[Point2<R>], cells: &[CellVisit<R>], start: Point2<R>, dir: Point2<R>) -> R {
    let at = |s: R| Point2::new(start.x + dir.x * s, start.y + dir.y * s);
    cells
        .iter()
        .flat_map(|c| [points[c.bs].dist(&at(c.enter_km)), points[c.bs].dist(&at(c.exit_km))])
        .fold(R::zero(), R::max)
}

/// Builds link-state segments from cell visits under `scheme`.
///
/// The first cell is served best-connected. Conventional hands over at every
/// crossing; skipping hands over at every second crossing and rides the skipped
/// cell on the previous BS. Each executed handover opens a `ho_delay` interval
/// (clipped to the cell) at the crossing.
fn build_segments<R: Real>(
    cells: &[CellVisit<R>],
    scheme: HoScheme,
    ho_distance_km: R,
    km_to_s: R,
) -> (Vec<Segment<R>>, usize) {
    let mut segments = Vec::with_capacity(cells.len() * 2);
    let mut handovers = 0;
    let mut serving = cells[0].bs;
    let push = |segments: &mut Vec<Segment<R>>, from: R, to: R, serving, cell_bs, state| {
        if to > from {
            segments.push(Segment {
                start_km: from,
                end_km: to,
                start_s: from * km_to_s,
                end_s: to * km_to_s,
                serving,
                cell_bs,
                state,
            });
        }
    };

    for (i, cell) in cells.iter().enumerate() {
        let skipped = scheme.skips() && i % 2 == 1;
        if i == 0 {
            push(
                &mut segments,
                cell.enter_km,
                cell.exit_km,
                serving,
                cell.bs,
                LinkState::Connected,
            );
        } else if skipped {
            push(
                &mut segments,
                cell.enter_km,
                cell.exit_km,
                serving,
                cell.bs,
                LinkState::Blackout,
            );
        } else {
            handovers += 1;
            serving = cell.bs;
            let ho_end = (cell.enter_km + ho_distance_km).min(cell.exit_km);
            push(
                &mut segments,
                cell.enter_km,
                ho_end,
                serving,
                cell.bs,
                LinkState::InHandover,
            );
            push(
                &mut segments,
                ho_end,
                cell.exit_km,
                serving,
                cell.bs,
                LinkState::Connected,
            );
        }
    }
    (segments, handovers)
}

/// Window radius that keeps a centred path of `length_km` a quarter radius from the edge.
fn trajectory_window_radius<R: Real>(lambda: R, length_km: R) -> R {
    default_window_radius(lambda).max(length_km * R::lit(2.0 / 3.0))
}

/// Moves a user along a straight line of `length_km`, centred on the origin with
/// a random heading, through one PPP realization.
pub fn simulate_trajectory<R: Real>(
    params: &NetworkParams<R>,
    velocity_kmh: R,
    length_km: R,
    scheme: HoScheme,
    seed: u64,
) -> Result<TrajectoryTrace<R>> {
    if !(length_km > R::zero()) {
        return Err(Error::invalid(
            "length_km",
            format!("must be positive, got {length_km}"),
        ));
    }
    let radius = trajectory_window_radius(params.lambda, length_km);
    simulate_trajectory_in_window(params, velocity_kmh, length_km, scheme, seed, radius)
}

/// [`simulate_trajectory`] with an explicit window radius; the path must stay a
/// quarter radius inside the window.
pub fn simulate_trajectory_in_window<R: Real>(
    params: &NetworkParams<R>,
    velocity_kmh: R,
    length_km: R,
    scheme: HoScheme,
    seed: u64,
    window_radius: R,
) -> Result<TrajectoryTrace<R>> {
    params.validate()?;
    if !(velocity_kmh > R::zero()) || !velocity_kmh.is_finite() {
        return Err(Error::invalid(
            "velocity",
            format!("must be positive, got {velocity_kmh}"),
        ));
    }
    if !(length_km > R::zero()) || !length_km.is_finite() {
        return Err(Error::invalid(
            "length_km",
            format!("must be positive, got {length_km}"),
        ));
    }
    let guard = window_radius / R::lit(4.0);
    let half = length_km / R::lit(2.0);
    if half + guard > window_radius {
        return Err(Error::WindowTooSmall(format!(
            "path half-length {half} km plus guard {guard} km exceeds window radius {window_radius} km"
        )));
    }

    let pattern = sample_ppp(params.lambda, window_radius, derive_seed(seed, 0))?;
    if pattern.is_empty() {
        return Err(Error::WindowTooSmall("window holds no BS".into()));
    }
    let mut rng = rng_from_seed(derive_seed(seed, 1));
    let theta = R::lit(std::f64::consts::TAU * rng.random::<f64>());
    let direction = Point2::new(theta.cos(), theta.sin());
    let start = Point2::new(-direction.x * half, -direction.y * half);

    // Restrict the walk to a corridor; a BS outside it can own a cell on the path
    // only if the service distance somewhere exceeds the corridor half-width.
    let corridor = guard.min(R::lit(4.0) / params.lambda.sqrt());
    let corridor2 = corridor * corridor;
    let mut candidates: Vec<usize> = (0..pattern.len())
        .filter(|&i| point_segment_dist2(&pattern.points[i], &start, &direction, length_km) <= corridor2)
        .collect();
    let mut cells = if candidates.is_empty() {
        Vec::new()
    } else {
        walk_cells(&pattern.points, &candidates, start, direction, length_km)
    };
    if cells.is_empty() || max_service_distance(&pattern.points, &cells, start, direction) >= corridor {
        candidates = (0..pattern.len()).collect();
        cells = walk_cells(&pattern.points, &candidates, start, direction, length_km);
    }
    let reach = max_service_distance(&pattern.points, &cells, start, direction);
    if reach >= guard {
        return Err(Error::WindowTooSmall(format!(
            "service distance {reach} km reaches the guard margin {guard} km"
        )));
    }

    let km_to_s = R::lit(SECONDS_PER_HOUR) / velocity_kmh;
    let ho_distance_km = params.ho_delay_s / km_to_s;
    let (segments, handovers) = build_segments(&cells, scheme, ho_distance_km, km_to_s);

    Ok(TrajectoryTrace {
        scheme,
        params: *params,
        velocity_kmh,
        length_km,
        start,
        direction,
        pattern,
        cells,
        segments,
        handovers,
    })
}

/// Totals over many independent trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStats<R> {
    pub trajectories: usize,
    pub velocity_kmh: R,
    pub total_km: R,
    pub crossings: usize,
    pub handovers: usize,
    pub blackout_km: R,
    /// Crossing count of each trajectory, in seed order.
    pub crossings_per_trajectory: Vec<usize>,
}

impl<R: Real> TrajectoryStats<R> {
    pub fn crossings_per_km(&self) -> R {
        R::from_usize(self.crossings).unwrap() / self.total_km
    }

    pub fn crossing_rate_per_hour(&self) -> R {
        self.crossings_per_km() * self.velocity_kmh
    }

    pub fn handover_rate_per_hour(&self) -> R {
        R::from_usize(self.handovers).unwrap() / self.total_km * self.velocity_kmh
    }

    pub fn blackout_fraction(&self) -> R {
        self.blackout_km / self.total_km
    }

    /// Standard error of the crossings-per-km estimate relative to its value,
    /// from the spread across equal-length trajectories.
    pub fn relative_standard_error(&self) -> R {
        let n = self.crossings_per_trajectory.len();
        if n < 2 || self.crossings == 0 {
            return R::infinity();
        }
        let mean = self.crossings as f64 / n as f64;
        let var = self
            .crossings_per_trajectory
            .iter()
            .map(|&c| (c as f64 - mean).powi(2))
            .sum::<f64>()
            / (n as f64 - 1.0);
        R::lit((var / n as f64).sqrt() / mean)
    }
}

/// Runs `count` trajectories with seeds derived from `seed` and totals them.
pub fn simulate_trajectories<R: Real>(
    params: &NetworkParams<R>,
    velocity_kmh: R,
    length_km: R,
    scheme: HoScheme,
    count: usize,
    seed: u64,
) -> Result<TrajectoryStats<R>> {
    if count == 0 {
        return Err(Error::invalid("count", "must be at least 1"));
    }
    let per: Vec<(usize, usize, R)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let trace = simulate_trajectory(params, velocity_kmh, length_km, scheme, derive_seed(seed, i as u64))?;
            Ok((
                trace.crossings(),
                trace.handovers,
                trace.distance_in(LinkState::Blackout),
            ))
        })
        .collect::<Result<_>>()?;
    Ok(TrajectoryStats {
        trajectories: count,
        velocity_kmh,
        total_km: length_km * R::from_usize(count).unwrap(),
        crossings: per.iter().map(|p| p.0).sum(),
        handovers: per.iter().map(|p| p.1).sum(),
        blackout_km: per.iter().fold(R::zero(), |acc, p| acc + p.2),
        crossings_per_trajectory: per.iter().map(|p| p.0).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_nearest(points: &[Point2<f64>], at: &Point2<f64>) -> usize {
        (0..points.len())
            .min_by(|&i, &j| points[i].dist2(at).partial_cmp(&points[j].dist2(at)).unwrap())
            .unwrap()
    }

    #[test]
    fn cell_walk_matches_dense_sampling() {
        let params = NetworkParams::<f64>::default().with_lambda(10.0);
        let trace = simulate_trajectory(&params, 60.0, 5.0, HoScheme::Conventional, 3).unwrap();
        // Every densely sampled point must lie in the cell the walk reports.
        let n = 20_000;
        for k in 0..n {
            let s = (k as f64 + 0.5) * trace.length_km / n as f64;
            let cell = trace.cells.iter().find(|c| c.enter_km <= s && s < c.exit_km).unwrap();
            let at = trace.position_at(s);
            let truth = brute_nearest(&trace.pattern.points, &at);
            if truth != cell.bs {
                // Only allowed within rounding of a boundary.
                let gap = (trace.pattern.points[truth].dist(&at) - trace.pattern.points[cell.bs].dist(&at)).abs();
                assert!(gap < 1e-9, "s={s}");
            }
        }
        // Consecutive cells differ.
        assert!(trace.cells.windows(2).all(|w| w[0].bs != w[1].bs));
    }

    #[test]
    fn segments_tile_the_path() {
        let params = NetworkParams::<f64>::default().with_ho_delay(2.0);
        for scheme in HoScheme::ALL {
            let trace = simulate_trajectory(&params, 60.0, 4.0, scheme, 17).unwrap();
            assert_eq!(trace.segments[0].start_km, 0.0);
            assert_eq!(trace.segments.last().unwrap().end_km, 4.0);
            for w in trace.segments.windows(2) {
                assert_eq!(w[0].end_km, w[1].start_km);
                assert_eq!(w[0].end_s, w[1].start_s);
            }
            assert!((trace.segments.last().unwrap().end_s - trace.duration_s()).abs() < 1e-9);
        }
    }

    #[test]
    fn skipping_alternates_states() {
        let params = NetworkParams::<f64>::default();
        let trace = simulate_trajectory(&params, 60.0, 6.0, HoScheme::Skipping, 8).unwrap();
        assert!(trace.crossings() > 10);
        // Collapse to one state per cell, ignoring handover intervals.
        let mut per_cell = Vec::new();
        for seg in &trace.segments {
            let state = if seg.state == LinkState::InHandover {
                LinkState::Connected
            } else {
                seg.state
            };
            if per_cell.last() != Some(&(seg.cell_bs, state)) {
                per_cell.push((seg.cell_bs, state));
            }
        }
        let states: Vec<LinkState> = per_cell.iter().map(|p| p.1).collect();
        for (i, s) in states.iter().enumerate() {
            let expect = if i % 2 == 0 {
                LinkState::Connected
            } else {
                LinkState::Blackout
            };
            assert_eq!(*s, expect, "cell {i}");
        }
        assert_eq!(trace.handovers, trace.crossings() / 2);
        // Blackout serves the BS of the previous cell.
        for seg in trace.segments.iter().filter(|s| s.state == LinkState::Blackout) {
            let idx = trace
                .cells
                .iter()
                .position(|c| c.bs == seg.cell_bs && c.enter_km == seg.start_km)
                .unwrap();
            assert_eq!(seg.serving, trace.cells[idx - 1].bs);
        }
    }

    #[test]
    fn conventional_hands_over_at_every_crossing() {
        let params = NetworkParams::<f64>::default();
        let trace = simulate_trajectory(&params, 90.0, 5.0, HoScheme::Conventional, 2).unwrap();
        assert_eq!(trace.handovers, trace.crossings());
        assert_eq!(trace.blackout_fraction(), 0.0);
        for seg in &trace.segments {
            assert_eq!(seg.serving, seg.cell_bs);
        }
    }

    #[test]
    fn deterministic_replay() {
        let params = NetworkParams::<f64>::default();
        let a = simulate_trajectory(&params, 60.0, 3.0, HoScheme::SkippingIC, 99).unwrap();
        let b = simulate_trajectory(&params, 60.0, 3.0, HoScheme::SkippingIC, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_small_window_and_bad_input() {
        let params = NetworkParams::<f64>::default();
        assert!(matches!(
            simulate_trajectory_in_window(&params, 60.0, 10.0, HoScheme::Conventional, 1, 5.0),
            Err(Error::WindowTooSmall(_))
        ));
        assert!(simulate_trajectory(&params, 0.0, 1.0, HoScheme::Conventional, 1).is_err());
        assert!(simulate_trajectory(&params, 60.0, 0.0, HoScheme::Conventional, 1).is_err());
    }

    #[test]
    fn segment_lookup() {
        let params = NetworkParams::<f64>::default();
        let trace = simulate_trajectory(&params, 60.0, 2.0, HoScheme::Skipping, 4).unwrap();
        for seg in &trace.segments {
            let mid = 0.5 * (seg.start_km + seg.end_km);
            assert_eq!(trace.segment_at(mid), Some(seg));
        }
        assert!(trace.segment_at(2.5).is_none());
    }

    #[test]
    fn f32_trajectory_runs() {
        let params = NetworkParams::<f32>::default();
        let trace = simulate_trajectory(&params, 60.0, 3.0, HoScheme::Conventional, 4).unwrap();
        assert!(trace.crossings() > 0);
    }
}
