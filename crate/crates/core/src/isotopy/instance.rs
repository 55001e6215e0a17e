use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::field::IsotopyConfig;
use super::maps::{ConfigSequence, RobotPath};
use super::trajectory::{ObstaclePath, Trajectory};
use super::{point_from, IsotopyError, Point};

/// One obstacle in an instance file, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObstacleSpec {
    Stationary { at: Vec<f64> },
    Polyline { times: Vec<f64>, points: Vec<Vec<f64>> },
    /// Circle in the `xy`-plane, angles in degrees.
    Arc { center: Vec<f64>, radius: f64, start_degrees: f64, end_degrees: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub step: f64,
    pub radius_cap: f64,
    pub tol_track: f64,
    pub tol_inv: f64,
    pub track_samples: usize,
    pub min_clearance: f64,
    /// Detour radius of the default planar planner.
    pub margin: f64,
    pub samples_per_leg: usize,
}

impl Default for Settings {
    fn default() -> Self {
        let c = IsotopyConfig::default();
        Settings {
            step: c.step,
            radius_cap: c.radius_cap,
            tol_track: c.tol_track,
            tol_inv: c.tol_inv,
            track_samples: c.track_samples,
            min_clearance: c.min_clearance,
            margin: 0.25,
            samples_per_leg: 50,
        }
    }
}

/// A moving-obstacle planning instance: dimensions, obstacle trajectories,
/// the configurations to visit and numerical settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub s: usize,
    /// `s` configurations of `n` points with `m` coordinates each.
    pub configurations: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    pub settings: Settings,
    pub obstacles: Vec<ObstacleSpec>,
}

impl Instance {
    pub fn from_toml_str(text: &str) -> Result<Self, IsotopyError> {
        let instance: Instance = toml::from_str(text).map_err(|e| IsotopyError::Instance(e.to_string()))?;
        instance.validate()?;
        Ok(instance)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, IsotopyError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| IsotopyError::Instance(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("instances serialize")
    }

    fn validate(&self) -> Result<(), IsotopyError> {
        let bad = |m: String| Err(IsotopyError::Instance(m));
        if self.obstacles.len() != self.p {
            return bad(format!("p = {} but {} obstacles are listed", self.p, self.obstacles.len()));
        }
        if self.configurations.len() != self.s {
            return bad(format!("s = {} but {} configurations are listed", self.s, self.configurations.len()));
        }
        if let Some(c) = self.configurations.iter().find(|c| c.len() != self.n) {
            return bad(format!("n = {} but a configuration has {} points", self.n, c.len()));
        }
        self.trajectory()?;
        self.sequence()?;
        Ok(())
    }

    pub fn trajectory(&self) -> Result<Trajectory, IsotopyError> {
        let dim = self.m;
        let paths = self
            .obstacles
            .iter()
            .map(|spec| match spec {
                ObstacleSpec::Stationary { at } => Ok(ObstaclePath::stationary(point_from(at, dim)?)),
                ObstacleSpec::Polyline { times, points } => {
                    let points = points.iter().map(|c| point_from(c, dim)).collect::<Result<Vec<_>, _>>()?;
                    ObstaclePath::polyline(times.clone(), points)
                }
                ObstacleSpec::Arc { center, radius, start_degrees, end_degrees } => ObstaclePath::arc(
                    point_from(center, dim)?,
                    *radius,
                    start_degrees.to_radians(),
                    end_degrees.to_radians(),
                ),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Trajectory::new(dim, paths)
    }

    pub fn sequence(&self) -> Result<ConfigSequence, IsotopyError> {
        let configs = self
            .configurations
            .iter()
            .map(|c| c.iter().map(|x| point_from(x, self.m)).collect::<Result<Vec<Point>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        ConfigSequence::new(self.m, configs)
    }

    pub fn isotopy_config(&self) -> IsotopyConfig {
        let s = &self.settings;
        IsotopyConfig {
            step: s.step,
            radius_cap: s.radius_cap,
            tol_track: s.tol_track,
            tol_inv: s.tol_inv,
            track_samples: s.track_samples,
            min_clearance: s.min_clearance,
        }
    }
}

/// Tab-separated table `t, x_1, ..., x_n` with one coordinate column per axis.
pub fn format_path_table(path: &RobotPath) -> String {
    let axes = ["x", "y", "z"];
    let mut out = String::from("t");
    for r in 1..=path.n() {
        for axis in &axes[..path.dim()] {
            let _ = write!(out, "\t{axis}{r}");
        }
    }
    out.push('\n');
    for (k, config) in path.samples().iter().enumerate() {
        let _ = write!(out, "{:.6}", path.time(k));
        for x in config {
            for c in &x[..path.dim()] {
                let _ = write!(out, "\t{c:.9}");
            }
        }
        out.push('\n');
    }
    out
}
