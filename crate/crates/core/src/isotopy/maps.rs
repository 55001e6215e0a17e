use super::field::IsotopyField;
use super::trajectory::Trajectory;
use super::{check_dim, dist, IsotopyError, Point};

/// Smallest robot-obstacle and robot-robot distance of a configuration,
/// together with the robot attaining it.
fn clearance(config: &[Point], obstacles: &[Point]) -> (f64, usize, String) {
    let mut worst = (f64::INFINITY, 0, String::new());
    for (r, x) in config.iter().enumerate() {
        for (o, q) in obstacles.iter().enumerate() {
            let d = dist(x, q);
            if d < worst.0 {
                worst = (d, r, format!("robot {} is {d:.3e} from obstacle {}", r + 1, o + 1));
            }
        }
        for (r2, y) in config.iter().enumerate().skip(r + 1) {
            let d = dist(x, y);
            if d < worst.0 {
                worst = (d, r, format!("robots {} and {} are {d:.3e} apart", r + 1, r2 + 1));
            }
        }
    }
    worst
}

fn check_configs(configs: &[Vec<Point>], dim: usize) -> Result<usize, IsotopyError> {
    check_dim(dim)?;
    let n = configs.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(IsotopyError::InvalidInput("configurations need at least one robot".into()));
    }
    if configs.iter().any(|c| c.len() != n) {
        return Err(IsotopyError::InvalidInput("all configurations must have the same number of robots".into()));
    }
    if dim == 2 && configs.iter().flatten().any(|p| p[2] != 0.0) {
        return Err(IsotopyError::InvalidInput("planar configuration with nonzero z".into()));
    }
    Ok(n)
}

/// Configurations `A_1, ..., A_s`; `A_i` is attached to time `(i-1)/(s-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigSequence {
    dim: usize,
    configs: Vec<Vec<Point>>,
}

impl ConfigSequence {
    pub fn new(dim: usize, configs: Vec<Vec<Point>>) -> Result<Self, IsotopyError> {
        if configs.len() < 2 {
            return Err(IsotopyError::InvalidInput("a sequence needs at least two configurations".into()));
        }
        check_configs(&configs, dim)?;
        Ok(ConfigSequence { dim, configs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn s(&self) -> usize {
        self.configs.len()
    }

    pub fn n(&self) -> usize {
        self.configs[0].len()
    }

    pub fn configs(&self) -> &[Vec<Point>] {
        &self.configs
    }

    pub fn time(&self, index: usize) -> f64 {
        index as f64 / (self.s() - 1) as f64
    }

    /// Checks `A_i` against the obstacles at its own time (`moving`) or
    /// against the initial positions.
    pub fn check(&self, trajectory: &Trajectory, moving: bool, min_clearance: f64) -> Result<(), IsotopyError> {
        for (index, config) in self.configs.iter().enumerate() {
            let t = if moving { self.time(index) } else { 0.0 };
            let (c, robot, _) = clearance(config, &trajectory.positions(t));
            if !(c > min_clearance) {
                return Err(IsotopyError::Clearance { index: index + 1, robot: robot + 1, clearance: c });
            }
        }
        Ok(())
    }

    /// Smallest clearance over the sequence.
    pub fn clearance(&self, trajectory: &Trajectory, moving: bool) -> f64 {
        (0..self.s())
            .map(|i| clearance(&self.configs[i], &trajectory.positions(if moving { self.time(i) } else { 0.0 })).0)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Robot positions sampled on the uniform grid `t_k = k / K`.
#[derive(Clone, Debug, PartialEq)]
pub struct RobotPath {
    dim: usize,
    samples: Vec<Vec<Point>>,
}

impl RobotPath {
    pub fn new(dim: usize, samples: Vec<Vec<Point>>) -> Result<Self, IsotopyError> {
        if samples.len() < 2 {
            return Err(IsotopyError::InvalidInput("a path needs at least two samples".into()));
        }
        check_configs(&samples, dim)?;
        Ok(RobotPath { dim, samples })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.samples[0].len()
    }

    pub fn samples(&self) -> &[Vec<Point>] {
        &self.samples
    }

    /// Number of grid intervals `K`.
    pub fn intervals(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 / self.intervals() as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.samples.len()).map(|k| self.time(k)).collect()
    }

    pub(crate) fn samples_mut(&mut self) -> &mut [Vec<Point>] {
        &mut self.samples
    }

    /// The evaluation map: samples at `t = (i-1)/(s-1)`, which must lie on the grid.
    pub fn sample(&self, s: usize) -> Result<ConfigSequence, IsotopyError> {
        if s < 2 || self.intervals() % (s - 1) != 0 {
            return Err(IsotopyError::InvalidInput(format!(
                "cannot sample {s} configurations from a path with {} intervals",
                self.intervals()
            )));
        }
        let stride = self.intervals() / (s - 1);
        ConfigSequence::new(self.dim, (0..s).map(|i| self.samples[i * stride].clone()).collect())
    }

    /// Checks every sample against the moving obstacles (`moving`) or the
    /// initial positions, reporting the first offending sample.
    pub fn check(&self, trajectory: &Trajectory, moving: bool, min_clearance: f64) -> Result<(), IsotopyError> {
        for (k, config) in self.samples.iter().enumerate() {
            let t = self.time(k);
            let (c, _, detail) = clearance(config, &trajectory.positions(if moving { t } else { 0.0 }));
            if !(c > min_clearance) {
                return Err(IsotopyError::Collision { time_index: k, time: t, detail });
            }
        }
        Ok(())
    }

    pub fn clearance(&self, trajectory: &Trajectory, moving: bool) -> f64 {
        (0..self.samples.len())
            .map(|k| clearance(&self.samples[k], &trajectory.positions(if moving { self.time(k) } else { 0.0 })).0)
            .fold(f64::INFINITY, f64::min)
    }

    /// Sup distance between two paths on a common grid.
    pub fn sup_distance(&self, other: &RobotPath) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| dist(x, y)))
            .fold(0.0, f64::max)
    }
}

fn check_field(field: &IsotopyField, dim: usize) -> Result<(), IsotopyError> {
    if field.trajectory().dim() != dim {
        return Err(IsotopyError::InvalidInput(format!(
            "dimension {dim} does not match the trajectory dimension {}",
            field.trajectory().dim()
        )));
    }
    Ok(())
}

/// `G(A_1, ..., A_s) = (φ_0(A_1), ..., φ_{(i-1)/(s-1)}(A_i), ...)`; the result
/// must keep clear of the initial obstacle positions.
pub fn map_g(seq: &ConfigSequence, field: &IsotopyField) -> Result<ConfigSequence, IsotopyError> {
    check_field(field, seq.dim)?;
    let configs = seq
        .configs
        .iter()
        .enumerate()
        .map(|(i, c)| c.iter().map(|x| field.phi(x, seq.time(i))).collect())
        .collect();
    let out = ConfigSequence { dim: seq.dim, configs };
    out.check(field.trajectory(), false, field.config().min_clearance)?;
    Ok(out)
}

/// `F(γ)(t) = φ_t(γ(t))`; the result must avoid the initial obstacle positions.
pub fn map_f(path: &RobotPath, field: &IsotopyField) -> Result<RobotPath, IsotopyError> {
    check_field(field, path.dim)?;
    let out = conjugate(path, |x, t| field.phi(x, t));
    out.check(field.trajectory(), false, field.config().min_clearance)?;
    Ok(out)
}

/// `F^{-1}(γ)(t) = ψ_t(γ(t))`; the result must avoid the moving obstacles.
pub fn map_f_inverse(path: &RobotPath, field: &IsotopyField) -> Result<RobotPath, IsotopyError> {
    check_field(field, path.dim)?;
    let out = conjugate(path, |x, t| field.psi(x, t));
    out.check(field.trajectory(), true, field.config().min_clearance)?;
    Ok(out)
}

fn conjugate(path: &RobotPath, map: impl Fn(&Point, f64) -> Point) -> RobotPath {
    let samples = path
        .samples
        .iter()
        .enumerate()
        .map(|(k, c)| c.iter().map(|x| map(x, path.time(k))).collect())
        .collect();
    RobotPath { dim: path.dim, samples }
}

#[cfg(test)]
mod tests {
    use super::super::field::{build_isotopy, IsotopyConfig};
    use super::super::trajectory::ObstaclePath;
    use super::*;

    fn swap_field() -> IsotopyField {
        build_isotopy(&Trajectory::swap_on_circle(1.0), &IsotopyConfig::default()).unwrap()
    }

    /// Two robots circling outside the obstacles, sampled at `k + 1` times.
    fn outer_path(k: usize) -> RobotPath {
        let samples = (0..=k)
            .map(|j| {
                let a = std::f64::consts::PI * j as f64 / k as f64 / 2.0;
                vec![[1.4 * a.cos(), 1.4 * a.sin(), 0.0], [0.0, 0.2 + 0.3 * a, 0.0]]
            })
            .collect();
        RobotPath::new(2, samples).unwrap()
    }

    #[test]
    fn constant_trajectory_gives_identity_maps() {
        let traj = Trajectory::new(2, vec![ObstaclePath::stationary([2.0, 0.0, 0.0])]).unwrap();
        let field = build_isotopy(&traj, &IsotopyConfig::default()).unwrap();
        let path = outer_path(10);
        assert_eq!(map_f(&path, &field).unwrap(), path);
        assert_eq!(map_f_inverse(&path, &field).unwrap(), path);
        let seq = path.sample(3).unwrap();
        assert_eq!(map_g(&seq, &field).unwrap(), seq);
    }

    #[test]
    fn g_keeps_the_first_configuration() {
        let field = swap_field();
        let seq = outer_path(20).sample(3).unwrap();
        let out = map_g(&seq, &field).unwrap();
        assert_eq!(out.configs()[0], seq.configs()[0]);
        assert_ne!(out.configs()[2], seq.configs()[2]);
    }

    #[test]
    fn g_clearance_is_controlled_by_lipschitz_bound() {
        let field = swap_field();
        let seq = outer_path(20).sample(3).unwrap();
        let before = seq.clearance(field.trajectory(), true);
        let after = map_g(&seq, &field).unwrap().clearance(field.trajectory(), false);
        assert!(after >= before / field.lipschitz_bound(1.0), "{after} vs {before}");
    }

    #[test]
    fn diagram_commutes_and_round_trips() {
        let field = swap_field();
        let path = outer_path(20);
        let f = map_f(&path, &field).unwrap();
        let via_f = f.sample(3).unwrap();
        let via_g = map_g(&path.sample(3).unwrap(), &field).unwrap();
        for (a, b) in via_f.configs().iter().zip(via_g.configs()) {
            for (x, y) in a.iter().zip(b) {
                assert!(dist(x, y) <= 1e-12);
            }
        }
        let back = map_f_inverse(&f, &field).unwrap();
        assert!(back.sup_distance(&path) <= 1e-3);
    }

    #[test]
    fn collisions_are_reported_with_index() {
        let field = swap_field();
        // sits on the obstacle starting position
        let path = RobotPath::new(2, vec![vec![[1.0, 0.0, 0.0]], vec![[1.0, 0.0, 0.0]]]).unwrap();
        match map_f(&path, &field) {
            Err(IsotopyError::Collision { time_index: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(path.sample(3), Err(IsotopyError::InvalidInput(_))));
        let seq = ConfigSequence::new(2, vec![vec![[0.0, 1.0, 0.0]], vec![[1.0, 0.0, 0.0]]]).unwrap();
        assert!(matches!(
            seq.check(field.trajectory(), true, 1e-6),
            Err(IsotopyError::Clearance { index: 2, robot: 1, .. })
        ));
    }
}
