//! Moving obstacles reduced to stationary ones.
//!
//! Given non-colliding obstacle trajectories `q_i(t)`, we integrate a velocity
//! field built from disjoint bumps carried along each obstacle. Its flow `ψ_t`
//! satisfies `ψ_t(q_i(0)) = q_i(t)`, so `φ_t = ψ_t^{-1}` freezes the obstacles
//! at their initial positions. Conjugating robot paths and configuration
//! sequences by `φ_t` turns a moving-obstacle planning problem into a
//! stationary one and back.
//!
//! Points live in `R^2` or `R^3`; planar points carry a zero third coordinate.

mod field;
mod instance;
mod maps;
mod planner;
mod trajectory;

pub use field::{build_isotopy, GridDiagnostics, IsotopyConfig, IsotopyField};
pub use instance::{format_path_table, Instance, ObstacleSpec, Settings};
pub use maps::{map_f, map_f_inverse, map_g, ConfigSequence, RobotPath};
pub use planner::{
    plan_with_moving_obstacles, verify_path, DetourPlanner, PathReport, PlannedPath, StationaryPlanner,
};
pub use trajectory::{ObstaclePath, Trajectory};

use thiserror::Error;

pub type Point = [f64; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsotopyError {
    #[error("only m = 2 or m = 3 is supported numerically (got {0})")]
    UnsupportedDimension(usize),
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),
    #[error("obstacles {0} and {1} are not separated (certified separation {2:.3e})")]
    SeparationViolation(usize, usize, f64),
    #[error("step {step} too large: per-step displacement {displacement:.3e} exceeds {limit:.3e}")]
    StepTooLarge { step: f64, displacement: f64, limit: f64 },
    #[error("obstacle {obstacle} tracked with error {error:.3e} at t = {time}")]
    TrackingFailure { obstacle: usize, time: f64, error: f64 },
    #[error("configuration {index}: robot {robot} has clearance {clearance:.3e}")]
    Clearance { index: usize, robot: usize, clearance: f64 },
    #[error("collision at sample {time_index} (t = {time}): {detail}")]
    Collision { time_index: usize, time: f64, detail: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("planner failed: {0}")]
    Planner(String),
    #[error("verification failed at sample {time_index} (t = {time}): {detail}")]
    Verification { time_index: usize, time: f64, detail: String },
    #[error("instance file: {0}")]
    Instance(String),
}

pub(crate) fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add(a: &Point, b: &Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn scale(a: &Point, k: f64) -> Point {
    [a[0] * k, a[1] * k, a[2] * k]
}

pub(crate) fn norm(a: &Point) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

pub(crate) fn dist(a: &Point, b: &Point) -> f64 {
    norm(&sub(a, b))
}

/// Converts a coordinate list of length `dim` to a point.
pub fn point_from(coords: &[f64], dim: usize) -> Result<Point, IsotopyError> {
    if coords.len() != dim {
        return Err(IsotopyError::InvalidInput(format!(
            "expected {dim} coordinates, got {}",
            coords.len()
        )));
    }
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(IsotopyError::InvalidInput("non-finite coordinate".into()));
    }
    let mut p = [0.0; 3];
    p[..dim].copy_from_slice(coords);
    Ok(p)
}

pub(crate) fn check_dim(dim: usize) -> Result<(), IsotopyError> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(IsotopyError::UnsupportedDimension(dim))
    }
}
