use serde::{Deserialize, Serialize};

use super::drift::{DriftSchedule, VirtualObstacle};
use super::{MotionError, RobotState, Vec2};

/// A repulsor: `strength` is the interaction force A (N), `range` the
/// interaction length B (m). Stop obstacles (red lights, stopped cars)
/// additionally forbid reversing while they are ahead of the robot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub position: Vec2,
    pub strength: f64,
    pub range: f64,
    #[serde(default)]
    pub stop: bool,
}

/// Lane keeping and cruise control.
///
/// The lateral loop turns the offset from the centerline into a desired
/// sideways velocity; the speed loop pushes the velocity vector toward
/// `(desired lateral velocity, desired_speed)`. Both loops are proportional,
/// with optional derivative damping on the lateral error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GoalParams {
    pub desired_speed: f64,
    pub speed_limit: f64,
    pub centerline: f64,
    pub k_speed: f64,
    pub k_lateral: f64,
    pub kd_lateral: f64,
}

impl Default for GoalParams {
    fn default() -> Self {
        GoalParams {
            desired_speed: 5.0,
            speed_limit: 8.0,
            centerline: 0.0,
            k_speed: 4.0,
            k_lateral: 2.0,
            kd_lateral: 0.0,
        }
    }
}

/// The hallucinated obstacle and when it is present.
#[derive(Debug, Clone, PartialEq)]
pub struct Communication {
    pub schedule: DriftSchedule,
    pub obstacle: VirtualObstacle,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ForceField {
    pub goal: GoalParams,
    pub obstacles: Vec<Obstacle>,
    pub com: Option<Communication>,
}

impl ForceField {
    pub fn validate(&self) -> Result<(), MotionError> {
        let g = &self.goal;
        if [g.k_speed, g.k_lateral, g.kd_lateral].iter().any(|k| !(*k >= 0.0)) {
            return Err(MotionError::InvalidParameter("controller gains must be non-negative".into()));
        }
        if !(g.desired_speed >= 0.0 && g.speed_limit > 0.0 && g.desired_speed <= g.speed_limit) {
            return Err(MotionError::InvalidParameter(
                "need 0 <= desired_speed <= speed_limit and speed_limit > 0".into(),
            ));
        }
        if let Some(o) = self.obstacles.iter().find(|o| !(o.range > 0.0) || !o.position.is_finite()) {
            return Err(MotionError::InvalidParameter(format!(
                "obstacle at ({}, {}) needs a positive interaction length",
                o.position.x, o.position.y
            )));
        }
        Ok(())
    }
}

/// `A·e^(−d/B)` along the line from the obstacle to the robot.
pub fn social_force(robot: Vec2, obstacle: &Obstacle) -> Result<Vec2, MotionError> {
    let away = robot - obstacle.position;
    let d = away.norm();
    if d == 0.0 {
        return Err(MotionError::CoincidentPositions { x: robot.x, y: robot.y });
    }
    Ok(away * (obstacle.strength * (-d / obstacle.range).exp() / d))
}

pub fn goal_force(robot: &RobotState, goal: &GoalParams) -> Vec2 {
    let lateral_error = goal.centerline - robot.position.x;
    let desired = Vec2::new(goal.k_lateral * lateral_error - goal.kd_lateral * robot.velocity.x, goal.desired_speed);
    (desired - robot.velocity) * goal.k_speed
}

/// Goal + environment + communication force at time `t`.
pub fn net_force(robot: &RobotState, field: &ForceField, t: f64) -> Result<Vec2, MotionError> {
    let mut f = goal_force(robot, &field.goal);
    for o in &field.obstacles {
        f += social_force(robot.position, o)?;
    }
    if let Some(com) = &field.com {
        if let Some(v) = super::hallucinate_virtual_obstacle(com, t, robot, field.goal.centerline) {
            f += social_force(robot.position, &v)?;
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obstacle(x: f64, y: f64, a: f64, b: f64) -> Obstacle {
        Obstacle { position: Vec2::new(x, y), strength: a, range: b, stop: false }
    }

    #[test]
    fn one_metre_behind() {
        let f = social_force(Vec2::new(0.0, 1.0), &obstacle(0.0, 0.0, 1.0, 1.0)).unwrap();
        assert!(f.x.abs() < 1e-15);
        assert!((f.y - (-1.0f64).exp()).abs() < 1e-15);
        assert!((f.y - 0.36787944117144233).abs() < 1e-12);
    }

    #[test]
    fn decays_and_vanishes() {
        let far = social_force(Vec2::new(20.0, 0.0), &obstacle(0.0, 0.0, 1.0, 1.0)).unwrap();
        assert!((far.norm() - 2.061153622438558e-9).abs() < 1e-20);
        let none = social_force(Vec2::new(0.3, -0.2), &obstacle(1.0, 1.0, 0.0, 1.0)).unwrap();
        assert_eq!(none.norm(), 0.0);
    }

    #[test]
    fn repulsive_direction() {
        let f = social_force(Vec2::new(3.0, 4.0), &obstacle(0.0, 0.0, 2.0, 5.0)).unwrap();
        assert!((f.norm() - 2.0 * (-1.0f64).exp()).abs() < 1e-12);
        assert!((f.x / f.norm() - 0.6).abs() < 1e-12 && (f.y / f.norm() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn coincident() {
        assert!(matches!(
            social_force(Vec2::new(1.0, 1.0), &obstacle(1.0, 1.0, 1.0, 1.0)),
            Err(MotionError::CoincidentPositions { .. })
        ));
    }

    #[test]
    fn goal_equilibrium() {
        let goal = GoalParams::default();
        let cruising = RobotState::new(Vec2::new(0.0, 10.0), Vec2::new(0.0, 5.0));
        assert_eq!(goal_force(&cruising, &goal), Vec2::ZERO);
        let offset = RobotState::new(Vec2::new(0.3, 0.0), Vec2::new(0.0, 5.0));
        let f = goal_force(&offset, &goal);
        assert!((f.x + 4.0 * 2.0 * 0.3).abs() < 1e-12);
    }

    #[test]
    fn field_validation() {
        let mut field = ForceField::default();
        assert!(field.validate().is_ok());
        field.obstacles.push(obstacle(0.0, 5.0, 1.0, 0.0));
        assert!(field.validate().is_err());
        let mut field = ForceField::default();
        field.goal.k_speed = -1.0;
        assert!(field.validate().is_err());
    }
}
