use super::trajectory::Trajectory;
use super::{add, dist, scale, sub, IsotopyError, Point};

/// Numerical parameters of the flow construction.
#[derive(Clone, Debug, PartialEq)]
pub struct IsotopyConfig {
    /// Integrator step `h`.
    pub step: f64,
    /// Upper bound on the bump radius, used when there are fewer than two
    /// obstacles or they stay far apart.
    pub radius_cap: f64,
    pub tol_track: f64,
    pub tol_inv: f64,
    /// Number of uniform times in `[0, 1]` at which tracking is checked.
    pub track_samples: usize,
    /// Required clearance between robots and obstacles (and between robots).
    pub min_clearance: f64,
}

impl Default for IsotopyConfig {
    fn default() -> Self {
        IsotopyConfig {
            step: 1e-3,
            radius_cap: 1.0,
            tol_track: 1e-4,
            tol_inv: 1e-3,
            track_samples: 101,
            min_clearance: 1e-6,
        }
    }
}

/// Maximum of `|d/du bump|` for the profile below.
const BUMP_SLOPE: f64 = 3.75;

/// Radial profile: 1 on `u <= 1/2`, 0 on `u >= 1`, quintic smoothstep in between.
fn bump(u: f64) -> f64 {
    if u <= 0.5 {
        1.0
    } else if u >= 1.0 {
        0.0
    } else {
        let w = 2.0 * (1.0 - u);
        w * w * w * (10.0 - 15.0 * w + 6.0 * w * w)
    }
}

/// The time-dependent vector field `v(x, t) = sum_i b_i(x, t) q_i'(t)` and its flow.
///
/// Evaluation is read-only, so a field can be shared across threads.
#[derive(Clone, Debug)]
pub struct IsotopyField {
    trajectory: Trajectory,
    config: IsotopyConfig,
    radius: f64,
    stops: Vec<f64>,
    tracking: Vec<f64>,
}

/// Outcome of the homeomorphism proxy on a point grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridDiagnostics {
    pub points: usize,
    pub max_round_trip: f64,
    pub min_pairwise_image_distance: f64,
}

/// Builds the flow, checking separation, the step guard and obstacle tracking.
pub fn build_isotopy(trajectory: &Trajectory, config: &IsotopyConfig) -> Result<IsotopyField, IsotopyError> {
    if !(config.step > 0.0) || !(config.radius_cap > 0.0) || config.track_samples < 2 {
        return Err(IsotopyError::InvalidInput(
            "step and radius cap must be positive and at least two tracking samples are needed".into(),
        ));
    }
    let (separation, pair) = trajectory.min_separation();
    if let Some((a, b)) = pair {
        // absorbs roundoff in the closed-form segment distance
        if !(separation > 1e-9) {
            return Err(IsotopyError::SeparationViolation(a, b, separation));
        }
    }
    let radius = (0.4 * separation).min(config.radius_cap);
    let displacement = config.step * trajectory.max_speed();
    if displacement >= radius / 4.0 {
        return Err(IsotopyError::StepTooLarge { step: config.step, displacement, limit: radius / 4.0 });
    }
    let mut field = IsotopyField {
        trajectory: trajectory.clone(),
        config: config.clone(),
        radius,
        stops: trajectory.stops(),
        tracking: Vec::new(),
    };
    field.tracking = field.track()?;
    Ok(field)
}

impl IsotopyField {
    pub fn trajectory(&self) -> &Trajectory {
        &self.trajectory
    }

    pub fn config(&self) -> &IsotopyConfig {
        &self.config
    }

    /// Bump radius `r`, constant in time.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Velocity at `(x, t)` using the trajectory pieces that contain `hint`.
    pub fn velocity(&self, x: &Point, t: f64, hint: f64) -> Point {
        let mut v = [0.0; 3];
        for q in self.trajectory.paths() {
            let b = bump(dist(x, &q.position(t)) / self.radius);
            if b > 0.0 {
                v = add(&v, &scale(&q.velocity(t, hint), b));
            }
        }
        v
    }

    /// Integrates the flow from time `t0` to `t1` (either direction) with RK4,
    /// restarting at every trajectory breakpoint in between.
    pub fn flow(&self, x: &Point, t0: f64, t1: f64) -> Point {
        let (t0, t1) = (t0.clamp(0.0, 1.0), t1.clamp(0.0, 1.0));
        if t0 == t1 {
            return *x;
        }
        let (lo, hi) = (t0.min(t1), t0.max(t1));
        let mut marks: Vec<f64> = self.stops.iter().copied().filter(|&s| s > lo && s < hi).collect();
        marks.insert(0, lo);
        marks.push(hi);
        if t1 < t0 {
            marks.reverse();
        }
        let mut y = *x;
        for w in marks.windows(2) {
            y = self.integrate_piece(y, w[0], w[1]);
        }
        y
    }

    fn integrate_piece(&self, mut y: Point, a: f64, b: f64) -> Point {
        let steps = ((b - a).abs() / self.config.step).ceil().max(1.0) as usize;
        let h = (b - a) / steps as f64;
        let hint = 0.5 * (a + b);
        for k in 0..steps {
            let t = a + h * k as f64;
            let k1 = self.velocity(&y, t, hint);
            let k2 = self.velocity(&add(&y, &scale(&k1, h / 2.0)), t + h / 2.0, hint);
            let k3 = self.velocity(&add(&y, &scale(&k2, h / 2.0)), t + h / 2.0, hint);
            let k4 = self.velocity(&add(&y, &scale(&k3, h)), t + h, hint);
            let incr = add(&add(&k1, &scale(&k2, 2.0)), &add(&scale(&k3, 2.0), &k4));
            y = add(&y, &scale(&incr, h / 6.0));
        }
        y
    }

    /// `ψ_t`, carrying `q_i(0)` to `q_i(t)`.
    pub fn psi(&self, x: &Point, t: f64) -> Point {
        self.flow(x, 0.0, t)
    }

    /// `φ_t = ψ_t^{-1}`, carrying `q_i(t)` back to `q_i(0)`.
    pub fn phi(&self, x: &Point, t: f64) -> Point {
        self.flow(x, t, 0.0)
    }

    fn track(&self) -> Result<Vec<f64>, IsotopyError> {
        let samples = self.config.track_samples;
        let times: Vec<f64> = (0..samples).map(|k| k as f64 / (samples - 1) as f64).collect();
        let mut errors = vec![0.0; samples];
        for (i, q) in self.trajectory.paths().iter().enumerate() {
            let mut y = q.position(0.0);
            for k in 1..samples {
                y = self.flow(&y, times[k - 1], times[k]);
                let error = dist(&y, &q.position(times[k]));
                if error > self.config.tol_track {
                    return Err(IsotopyError::TrackingFailure { obstacle: i, time: times[k], error });
                }
                errors[k] = f64::max(errors[k], error);
            }
        }
        Ok(errors)
    }

    /// Tracking errors `max_i |ψ_t(q_i(0)) - q_i(t)|` at the uniform check times.
    pub fn tracking_errors(&self) -> &[f64] {
        &self.tracking
    }

    pub fn tracking_error(&self) -> f64 {
        self.tracking.iter().copied().fold(0.0, f64::max)
    }

    /// `max_i |ψ_t(q_i(0)) - q_i(t)|` from a single integration over `[0, t]`.
    pub fn endpoint_error(&self, t: f64) -> f64 {
        self.trajectory
            .paths()
            .iter()
            .map(|q| dist(&self.psi(&q.position(0.0), t), &q.position(t)))
            .fold(0.0, f64::max)
    }

    /// Upper bound on the Lipschitz constant of `ψ_t` and `φ_t` from Grönwall.
    pub fn lipschitz_bound(&self, t: f64) -> f64 {
        (BUMP_SLOPE * self.trajectory.max_speed() * t.abs() / self.radius).exp()
    }

    /// Distance beyond which points are never moved: bump radius plus the
    /// largest obstacle displacement, measured from the initial positions.
    pub fn support_bound(&self) -> f64 {
        self.radius + self.trajectory.max_displacement()
    }

    /// Round-trip `ψ_t(φ_t(x))` and injectivity of `φ_t` on a `k x k` grid
    /// (a `k x k x k` grid in three dimensions) of side `2 * half_width`.
    pub fn grid_diagnostics(&self, t: f64, center: &Point, half_width: f64, k: usize) -> GridDiagnostics {
        let axis: Vec<f64> = (0..k)
            .map(|a| if k == 1 { 0.0 } else { -half_width + 2.0 * half_width * a as f64 / (k - 1) as f64 })
            .collect();
        let mut points = Vec::new();
        let zs: Vec<f64> = if self.trajectory.dim() == 3 { axis.clone() } else { vec![0.0] };
        for &x in &axis {
            for &y in &axis {
                for &z in &zs {
                    points.push(add(center, &[x, y, z]));
                }
            }
        }
        let images: Vec<Point> = points.iter().map(|p| self.phi(p, t)).collect();
        let max_round_trip = points
            .iter()
            .zip(&images)
            .map(|(p, img)| dist(&self.psi(img, t), p))
            .fold(0.0, f64::max);
        let mut min_pairwise = f64::INFINITY;
        for a in 0..images.len() {
            for b in a + 1..images.len() {
                min_pairwise = min_pairwise.min(norm_sq(&sub(&images[a], &images[b])));
            }
        }
        GridDiagnostics { points: points.len(), max_round_trip, min_pairwise_image_distance: min_pairwise.sqrt() }
    }
}

fn norm_sq(a: &Point) -> f64 {
    a[0] * a[0] + a[1] * a[1] + a[2] * a[2]
}
