//! Locomotion as a carrier: a point-mass robot driven by social forces
//! drifts sideways on cue, spelling Morse in its lateral offset.
//!
//! Coordinates are planar: `x` is lateral, `y` is along the lane. The net
//! force is a goal term (speed and lane keeping), repulsion from real
//! obstacles, and repulsion from a hallucinated obstacle that is present only
//! while a dot or dash is being sent.

mod decode;
mod drift;
mod force;
mod sim;

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use decode::{decode_trajectory, lateral_pulses, Pulse, RESAMPLE_RATE};
pub use drift::{
    calibrate_virtual_obstacle, hallucinate_virtual_obstacle, DriftCode, DriftSchedule, DriftWindow, VirtualObstacle,
    VirtualObstacleGeometry,
};
pub use force::{goal_force, net_force, social_force, Communication, ForceField, GoalParams, Obstacle};
pub use sim::{simulate, simulate_field};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MotionError {
    #[error("robot and obstacle coincide at ({x}, {y})")]
    CoincidentPositions { x: f64, y: f64 },
    #[error("message needs {needed:.2} s of drift but the density cap allows {allowed:.2} s")]
    ScheduleTooLong { needed: f64, allowed: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),
    #[error("no lateral pulses found")]
    NoPulsesFound,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Position (m) and velocity (m/s) of a unit-mass robot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotState {
    pub position: Vec2,
    pub velocity: Vec2,
}

impl RobotState {
    pub fn new(position: Vec2, velocity: Vec2) -> Self {
        RobotState { position, velocity }
    }

    /// Angle from the lateral x axis to the velocity vector, radians.
    pub fn heading(&self) -> f64 {
        self.velocity.y.atan2(self.velocity.x)
    }

    pub fn speed(&self) -> f64 {
        self.velocity.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

/// Positions over strictly increasing time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TrajectorySample>", into = "Vec<TrajectorySample>")]
pub struct Trajectory2D {
    samples: Vec<TrajectorySample>,
}

impl Trajectory2D {
    pub fn new(samples: Vec<TrajectorySample>) -> Result<Self, MotionError> {
        if samples.iter().any(|s| !(s.t.is_finite() && s.x.is_finite() && s.y.is_finite())) {
            return Err(MotionError::InvalidTrajectory("non-finite sample".into()));
        }
        if let Some(i) = samples.windows(2).position(|w| !(w[1].t > w[0].t)) {
            return Err(MotionError::InvalidTrajectory(format!("timestamp {} does not increase", i + 1)));
        }
        Ok(Trajectory2D { samples })
    }

    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn start(&self) -> Option<f64> {
        self.samples.first().map(|s| s.t)
    }

    pub fn end(&self) -> Option<f64> {
        self.samples.last().map(|s| s.t)
    }

    /// Linear interpolation at `t`, clamped to the first and last samples.
    pub fn position_at(&self, t: f64) -> Option<Vec2> {
        let s = &self.samples;
        let first = s.first()?;
        let last = s.last()?;
        if t <= first.t {
            return Some(Vec2::new(first.x, first.y));
        }
        if t >= last.t {
            return Some(Vec2::new(last.x, last.y));
        }
        let i = s.partition_point(|p| p.t <= t);
        let (a, b) = (&s[i - 1], &s[i]);
        let w = (t - a.t) / (b.t - a.t);
        Some(Vec2::new(a.x + w * (b.x - a.x), a.y + w * (b.y - a.y)))
    }
}

impl TryFrom<Vec<TrajectorySample>> for Trajectory2D {
    type Error = MotionError;

    fn try_from(samples: Vec<TrajectorySample>) -> Result<Self, Self::Error> {
        Trajectory2D::new(samples)
    }
}

impl From<Trajectory2D> for Vec<TrajectorySample> {
    fn from(t: Trajectory2D) -> Self {
        t.samples
    }
}
