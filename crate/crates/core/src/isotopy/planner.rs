use std::f64::consts::PI;

use super::field::{build_isotopy, IsotopyConfig, IsotopyField};
use super::maps::{map_f_inverse, map_g, ConfigSequence, RobotPath};
use super::trajectory::Trajectory;
use super::{add, dist, scale, sub, IsotopyError, Point};

/// A motion planner for stationary point obstacles.
///
/// Given configurations `A_1, ..., A_s` avoiding `obstacles`, it returns a path
/// on a grid of `legs_samples * (s - 1)` intervals that passes through `A_i`
/// at grid index `(i - 1) * legs_samples` and avoids the obstacles.
pub trait StationaryPlanner {
    fn plan(&self, seq: &ConfigSequence, obstacles: &[Point], leg_samples: usize) -> Result<RobotPath, IsotopyError>;
}

/// Planar planner: each robot moves in a straight line and swings around any
/// obstacle closer than `margin` along a circular arc.
///
/// Robots move simultaneously and are not coordinated with each other; the
/// planner fails if they meet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetourPlanner {
    pub margin: f64,
}

#[derive(Clone, Copy, Debug)]
enum Piece {
    Line(Point, Point),
    Arc { center: Point, radius: f64, start: f64, sweep: f64 },
}

impl Piece {
    fn length(&self) -> f64 {
        match *self {
            Piece::Line(a, b) => dist(&a, &b),
            Piece::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    fn at(&self, u: f64) -> Point {
        match *self {
            Piece::Line(a, b) => add(&a, &scale(&sub(&b, &a), u)),
            Piece::Arc { center, radius, start, sweep } => {
                let angle = start + sweep * u;
                [center[0] + radius * angle.cos(), center[1] + radius * angle.sin(), 0.0]
            }
        }
    }
}

fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a - 2.0 * PI
    } else {
        a
    }
}

fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl DetourPlanner {
    fn leg(&self, a: Point, b: Point, obstacles: &[Point]) -> Result<Vec<Piece>, IsotopyError> {
        let d = sub(&b, &a);
        let len2 = dot(&d, &d);
        if len2 == 0.0 {
            return Ok(vec![Piece::Line(a, b)]);
        }
        // (entry, exit, arc) per obstacle the segment passes too close to
        let mut detours = Vec::new();
        for c in obstacles {
            let rho = self.margin.min(0.9 * dist(&a, c).min(dist(&b, c)));
            if !(rho > 0.0) {
                return Err(IsotopyError::Planner(format!("endpoint lies on the obstacle at {c:?}")));
            }
            let u = dot(&sub(c, &a), &d) / len2;
            let foot = add(&a, &scale(&d, u));
            let h = dist(&foot, c);
            if h >= rho {
                continue;
            }
            let half = (rho * rho - h * h).sqrt() / len2.sqrt();
            let (p1, p2) = (add(&a, &scale(&d, u - half)), add(&a, &scale(&d, u + half)));
            let away = if h > 1e-12 { scale(&sub(&foot, c), 1.0 / h) } else { [-d[1], d[0], 0.0] };
            let start = (p1[1] - c[1]).atan2(p1[0] - c[0]);
            let sweep = 2.0 * wrap(away[1].atan2(away[0]) - start);
            detours.push((u - half, u + half, p1, p2, Piece::Arc { center: *c, radius: rho, start, sweep }));
        }
        detours.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut pieces = Vec::new();
        let (mut cursor, mut at) = (0.0, a);
        for (u1, u2, p1, p2, arc) in detours {
            if u1 < cursor {
                return Err(IsotopyError::Planner("detours around neighbouring obstacles overlap".into()));
            }
            pieces.push(Piece::Line(at, p1));
            pieces.push(arc);
            cursor = u2;
            at = p2;
        }
        pieces.push(Piece::Line(at, b));
        Ok(pieces)
    }
}

/// Point at fraction `u` of the total arc length.
fn along(pieces: &[Piece], u: f64) -> Point {
    let total: f64 = pieces.iter().map(Piece::length).sum();
    if total == 0.0 {
        return pieces[0].at(0.0);
    }
    let mut target = u * total;
    for piece in pieces {
        let l = piece.length();
        if target <= l && l > 0.0 {
            return piece.at(target / l);
        }
        target -= l;
    }
    pieces.last().unwrap().at(1.0)
}

impl StationaryPlanner for DetourPlanner {
    fn plan(&self, seq: &ConfigSequence, obstacles: &[Point], leg_samples: usize) -> Result<RobotPath, IsotopyError> {
        if seq.dim() != 2 {
            return Err(IsotopyError::Planner("the detour planner only works in the plane".into()));
        }
        if leg_samples == 0 {
            return Err(IsotopyError::InvalidInput("need at least one sample per leg".into()));
        }
        let configs = seq.configs();
        let mut samples = vec![configs[0].clone()];
        for pair in configs.windows(2) {
            let legs = pair[0]
                .iter()
                .zip(&pair[1])
                .map(|(a, b)| self.leg(*a, *b, obstacles))
                .collect::<Result<Vec<_>, _>>()?;
            for j in 1..=leg_samples {
                if j == leg_samples {
                    samples.push(pair[1].clone());
                } else {
                    let u = j as f64 / leg_samples as f64;
                    samples.push(legs.iter().map(|pieces| along(pieces, u)).collect());
                }
            }
        }
        Ok(RobotPath::new(seq.dim(), samples)?)
    }
}

/// Result of checking a path against moving obstacles.
#[derive(Clone, Debug, PartialEq)]
pub struct PathReport {
    pub samples: usize,
    /// Smallest robot-obstacle or robot-robot distance over all samples.
    pub min_clearance: f64,
    /// Largest `|γ((i-1)/(s-1)) - A_i|`; zero when the configurations are hit exactly.
    pub max_visit_error: f64,
}

/// Checks non-collision with the moving obstacles at every sample and that
/// the path visits `seq` at the prescribed grid times.
pub fn verify_path(
    path: &RobotPath,
    seq: &ConfigSequence,
    trajectory: &Trajectory,
    min_clearance: f64,
) -> Result<PathReport, IsotopyError> {
    let s = seq.s();
    if path.intervals() % (s - 1) != 0 || path.n() != seq.n() {
        return Err(IsotopyError::InvalidInput("path grid does not contain the visiting times".into()));
    }
    path.check(trajectory, true, min_clearance).map_err(|e| match e {
        IsotopyError::Collision { time_index, time, detail } => IsotopyError::Verification { time_index, time, detail },
        other => other,
    })?;
    let stride = path.intervals() / (s - 1);
    let mut max_visit_error = 0.0f64;
    for (i, target) in seq.configs().iter().enumerate() {
        let k = i * stride;
        let error = path.samples()[k].iter().zip(target).map(|(x, y)| dist(x, y)).fold(0.0, f64::max);
        if error != 0.0 {
            return Err(IsotopyError::Verification {
                time_index: k,
                time: path.time(k),
                detail: format!("configuration {} missed by {error:.3e}", i + 1),
            });
        }
        max_visit_error = max_visit_error.max(error);
    }
    Ok(PathReport { samples: path.samples().len(), min_clearance: path.clearance(trajectory, true), max_visit_error })
}

/// A verified path for moving obstacles together with the intermediate data.
#[derive(Clone, Debug)]
pub struct PlannedPath {
    pub path: RobotPath,
    pub stationary_path: RobotPath,
    pub stationary_sequence: ConfigSequence,
    pub report: PathReport,
    /// Largest correction applied when snapping the visiting samples onto `A_i`.
    pub snap_error: f64,
    pub field: IsotopyField,
}

/// Solves a moving-obstacle problem through a stationary planner: map the
/// configurations by `G`, plan around `Q_p`, pull the path back by `F^{-1}`,
/// then verify it directly against the moving obstacles.
pub fn plan_with_moving_obstacles(
    seq: &ConfigSequence,
    trajectory: &Trajectory,
    planner: &dyn StationaryPlanner,
    config: &IsotopyConfig,
    leg_samples: usize,
) -> Result<PlannedPath, IsotopyError> {
    seq.check(trajectory, true, config.min_clearance)?;
    let field = build_isotopy(trajectory, config)?;
    let stationary_sequence = map_g(seq, &field)?;
    let obstacles = trajectory.initial_positions();
    let stationary_path = planner.plan(&stationary_sequence, &obstacles, leg_samples)?;
    stationary_path
        .check(trajectory, false, config.min_clearance)
        .map_err(|e| IsotopyError::Planner(e.to_string()))?;
    let mut path = map_f_inverse(&stationary_path, &field)?;
    let mut snap_error = 0.0f64;
    for (i, target) in seq.configs().iter().enumerate() {
        let k = i * leg_samples;
        let sample = &mut path.samples_mut()[k];
        let error = sample.iter().zip(target).map(|(x, y)| dist(x, y)).fold(0.0, f64::max);
        if error > config.tol_inv {
            return Err(IsotopyError::Verification {
                time_index: k,
                time: k as f64 / (leg_samples * (seq.s() - 1)) as f64,
                detail: format!("pulled-back path misses configuration {} by {error:.3e}", i + 1),
            });
        }
        snap_error = snap_error.max(error);
        sample.clone_from(target);
    }
    let report = verify_path(&path, seq, trajectory, config.min_clearance)?;
    Ok(PlannedPath { path, stationary_path, stationary_sequence, report, snap_error, field })
}
