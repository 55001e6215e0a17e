use std::f64::consts::PI;

use super::{add, check_dim, dist, norm, scale, sub, IsotopyError, Point};

/// Path of one obstacle over `t in [0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum ObstaclePath {
    /// Linear interpolation between breakpoints `(times[k], points[k])`;
    /// `times` runs strictly increasing from 0 to 1.
    Polyline { times: Vec<f64>, points: Vec<Point> },
    /// Uniform motion along a circle in the `xy`-plane.
    Arc { center: Point, radius: f64, start_angle: f64, end_angle: f64 },
}

impl ObstaclePath {
    pub fn stationary(at: Point) -> Self {
        ObstaclePath::Polyline { times: vec![0.0, 1.0], points: vec![at, at] }
    }

    pub fn polyline(times: Vec<f64>, points: Vec<Point>) -> Result<Self, IsotopyError> {
        let bad = |m: &str| Err(IsotopyError::InvalidTrajectory(m.to_string()));
        if times.len() < 2 || times.len() != points.len() {
            return bad("a polyline needs at least two breakpoints and one point per time");
        }
        if times[0] != 0.0 || *times.last().unwrap() != 1.0 {
            return bad("polyline times must start at 0 and end at 1");
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return bad("polyline times must be strictly increasing");
        }
        Ok(ObstaclePath::Polyline { times, points })
    }

    pub fn arc(center: Point, radius: f64, start_angle: f64, end_angle: f64) -> Result<Self, IsotopyError> {
        if !(radius > 0.0) || !start_angle.is_finite() || !end_angle.is_finite() {
            return Err(IsotopyError::InvalidTrajectory("arc needs a positive radius and finite angles".into()));
        }
        Ok(ObstaclePath::Arc { center, radius, start_angle, end_angle })
    }

    fn segment(times: &[f64], t: f64) -> usize {
        let k = times.partition_point(|&x| x <= t);
        k.clamp(1, times.len() - 1) - 1
    }

    pub fn position(&self, t: f64) -> Point {
        let t = t.clamp(0.0, 1.0);
        match self {
            ObstaclePath::Polyline { times, points } => {
                let k = Self::segment(times, t);
                let u = (t - times[k]) / (times[k + 1] - times[k]);
                add(&points[k], &scale(&sub(&points[k + 1], &points[k]), u))
            }
            ObstaclePath::Arc { center, radius, start_angle, end_angle } => {
                let a = start_angle + (end_angle - start_angle) * t;
                [center[0] + radius * a.cos(), center[1] + radius * a.sin(), center[2]]
            }
        }
    }

    /// Velocity on the smooth piece containing `hint`; at a breakpoint the
    /// caller picks the side through `hint`.
    pub fn velocity(&self, t: f64, hint: f64) -> Point {
        match self {
            ObstaclePath::Polyline { times, points } => {
                let k = Self::segment(times, hint.clamp(0.0, 1.0));
                scale(&sub(&points[k + 1], &points[k]), 1.0 / (times[k + 1] - times[k]))
            }
            ObstaclePath::Arc { radius, start_angle, end_angle, .. } => {
                let w = end_angle - start_angle;
                let a = start_angle + w * t;
                [-radius * w * a.sin(), radius * w * a.cos(), 0.0]
            }
        }
    }

    /// Interior breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            ObstaclePath::Polyline { times, .. } => times[1..times.len() - 1].to_vec(),
            ObstaclePath::Arc { .. } => Vec::new(),
        }
    }

    pub fn max_speed(&self) -> f64 {
        match self {
            ObstaclePath::Polyline { times, points } => (0..times.len() - 1)
                .map(|k| dist(&points[k + 1], &points[k]) / (times[k + 1] - times[k]))
                .fold(0.0, f64::max),
            ObstaclePath::Arc { radius, start_angle, end_angle, .. } => radius * (end_angle - start_angle).abs(),
        }
    }

    fn is_linear(&self) -> bool {
        matches!(self, ObstaclePath::Polyline { .. })
    }

    fn points(&self) -> Vec<Point> {
        match self {
            ObstaclePath::Polyline { points, .. } => points.clone(),
            ObstaclePath::Arc { center, .. } => vec![*center],
        }
    }
}

/// Obstacle trajectories `Q = (q_1, ..., q_p)` in `R^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    dim: usize,
    paths: Vec<ObstaclePath>,
}

impl Trajectory {
    pub fn new(dim: usize, paths: Vec<ObstaclePath>) -> Result<Self, IsotopyError> {
        check_dim(dim)?;
        for path in &paths {
            if dim == 2 && path.points().iter().any(|p| p[2] != 0.0) {
                return Err(IsotopyError::InvalidTrajectory("planar trajectory with nonzero z".into()));
            }
        }
        Ok(Trajectory { dim, paths })
    }

    /// Two obstacles exchanging places along a circle of radius `radius`.
    pub fn swap_on_circle(radius: f64) -> Self {
        let origin = [0.0; 3];
        Trajectory {
            dim: 2,
            paths: vec![
                ObstaclePath::Arc { center: origin, radius, start_angle: 0.0, end_angle: PI },
                ObstaclePath::Arc { center: origin, radius, start_angle: PI, end_angle: 2.0 * PI },
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> usize {
        self.paths.len()
    }

    pub fn paths(&self) -> &[ObstaclePath] {
        &self.paths
    }

    pub fn positions(&self, t: f64) -> Vec<Point> {
        self.paths.iter().map(|q| q.position(t)).collect()
    }

    /// The stationary obstacle set `Q_p = {q_i(0)}`.
    pub fn initial_positions(&self) -> Vec<Point> {
        self.positions(0.0)
    }

    /// Sorted `0 = t_0 < ... < t_k = 1` including every interior breakpoint.
    pub fn stops(&self) -> Vec<f64> {
        let mut stops: Vec<f64> = self.paths.iter().flat_map(|q| q.breakpoints()).collect();
        stops.push(0.0);
        stops.push(1.0);
        stops.sort_by(f64::total_cmp);
        stops.dedup();
        stops
    }

    pub fn max_speed(&self) -> f64 {
        self.paths.iter().map(ObstaclePath::max_speed).fold(0.0, f64::max)
    }

    /// Largest distance any obstacle gets from its starting point.
    pub fn max_displacement(&self) -> f64 {
        self.paths
            .iter()
            .map(|q| {
                let start = q.position(0.0);
                match q {
                    ObstaclePath::Polyline { points, .. } => {
                        points.iter().map(|p| dist(p, &start)).fold(0.0, f64::max)
                    }
                    ObstaclePath::Arc { radius, .. } => 2.0 * radius,
                }
            })
            .fold(0.0, f64::max)
    }

    /// Certified lower bound on `min_t min_{i != j} |q_i(t) - q_j(t)|`
    /// (infinite with fewer than two obstacles). Returns the worst pair too.
    pub fn min_separation(&self) -> (f64, Option<(usize, usize)>) {
        let stops = self.stops();
        let mut best = (f64::INFINITY, None);
        for a in 0..self.paths.len() {
            for b in a + 1..self.paths.len() {
                for w in stops.windows(2) {
                    let d = self.pair_lower_bound(a, b, w[0], w[1]);
                    if d < best.0 {
                        best = (d, Some((a, b)));
                    }
                }
            }
        }
        best
    }

    fn pair_lower_bound(&self, a: usize, b: usize, t0: f64, t1: f64) -> f64 {
        let (qa, qb) = (&self.paths[a], &self.paths[b]);
        let diff = |t: f64| sub(&qa.position(t), &qb.position(t));
        if qa.is_linear() && qb.is_linear() {
            // the difference moves linearly on [t0, t1]
            let d0 = diff(t0);
            let dv = sub(&diff(t1), &d0);
            let vv = norm(&dv).powi(2);
            let u = if vv == 0.0 {
                0.0
            } else {
                (-(d0[0] * dv[0] + d0[1] * dv[1] + d0[2] * dv[2]) / vv).clamp(0.0, 1.0)
            };
            return norm(&add(&d0, &scale(&dv, u)));
        }
        const SAMPLES: usize = 4096;
        let lipschitz = qa.max_speed() + qb.max_speed();
        let dt = (t1 - t0) / SAMPLES as f64;
        let sampled = (0..=SAMPLES)
            .map(|k| norm(&diff(t0 + dt * k as f64)))
            .fold(f64::INFINITY, f64::min);
        sampled - lipschitz * dt / 2.0
    }
}
