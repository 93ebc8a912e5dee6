use super::drift::{calibrate_virtual_obstacle, DriftCode, DriftSchedule, VirtualObstacleGeometry};
use super::force::{net_force, Communication, ForceField};
use super::{MotionError, RobotState, Trajectory2D, TrajectorySample};
use crate::message::MorseSequence;

/// Drives `msg` through a calibrated virtual obstacle on top of `field`
/// (whose own `com` is replaced) and integrates for `duration` seconds.
pub fn simulate(
    initial: RobotState,
    field: &ForceField,
    msg: &MorseSequence,
    code: &DriftCode,
    dt: f64,
    duration: f64,
) -> Result<Trajectory2D, MotionError> {
    let schedule = DriftSchedule::new(msg, code)?;
    let allowed = code.density * duration;
    if schedule.active_time() > allowed {
        return Err(MotionError::ScheduleTooLong { needed: schedule.active_time(), allowed });
    }
    if schedule.end() > duration {
        return Err(MotionError::ScheduleTooLong { needed: schedule.end(), allowed: duration });
    }
    let obstacle = calibrate_virtual_obstacle(code, VirtualObstacleGeometry::default(), &field.goal)?;
    let field = ForceField { com: Some(Communication { schedule, obstacle }), ..field.clone() };
    simulate_field(initial, &field, dt, duration)
}

/// Explicit Euler on a unit mass, one sample per step including `t = 0`.
///
/// After each velocity update the speed is clamped to the limit, and if a
/// stop obstacle lies ahead the robot may not start reversing.
pub fn simulate_field(
    initial: RobotState,
    field: &ForceField,
    dt: f64,
    duration: f64,
) -> Result<Trajectory2D, MotionError> {
    field.validate()?;
    if !(dt > 0.0 && dt <= 0.1) {
        return Err(MotionError::InvalidParameter(format!("time step {dt} outside (0, 0.1]")));
    }
    if !(duration >= 0.0 && duration.is_finite()) {
        return Err(MotionError::InvalidParameter("duration must be finite and non-negative".into()));
    }
    if !(initial.position.is_finite() && initial.velocity.is_finite()) {
        return Err(MotionError::InvalidParameter("initial state must be finite".into()));
    }
    let steps = (duration / dt).round() as usize;
    let limit = field.goal.speed_limit;
    let mut state = initial;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(TrajectorySample { t: 0.0, x: state.position.x, y: state.position.y });
    for k in 0..steps {
        let t = k as f64 * dt;
        let f = net_force(&state, field, t)?;
        let mut v = state.velocity + f * dt;
        let speed = v.norm();
        if speed > limit {
            v = v * (limit / speed);
        }
        let stop_ahead = field.obstacles.iter().any(|o| o.stop && o.position.y > state.position.y);
        if stop_ahead && v.y < 0.0 {
            v.y = 0.0;
        }
        state.position += state.velocity * dt;
        state.velocity = v;
        samples.push(TrajectorySample { t: (k + 1) as f64 * dt, x: state.position.x, y: state.position.y });
    }
    Trajectory2D::new(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::message::text_to_morse;
    use crate::motion::{GoalParams, Obstacle, Vec2};

    fn cruising() -> RobotState {
        RobotState::new(Vec2::ZERO, Vec2::new(0.0, 5.0))
    }

    fn max_offset(tr: &Trajectory2D) -> f64 {
        tr.samples().iter().map(|s| s.x.abs()).fold(0.0, f64::max)
    }

    #[test]
    fn empty_message_holds_the_lane() {
        let msg = MorseSequence::new(vec![]).unwrap();
        let tr = simulate(cruising(), &ForceField::default(), &msg, &DriftCode::default(), 0.02, 10.0).unwrap();
        assert!(max_offset(&tr) < 1e-6);
        let s = tr.samples();
        let vy = (s[s.len() - 1].y - s[s.len() - 2].y) / 0.02;
        assert!((vy - 5.0).abs() < 0.05);
    }

    #[test]
    fn single_dot() {
        let code = DriftCode::default();
        let msg = text_to_morse("E").unwrap();
        let tr = simulate(cruising(), &ForceField::default(), &msg, &code, 0.02, 30.0).unwrap();
        let peak = max_offset(&tr);
        assert!(peak >= 0.5 * code.amplitude && peak <= 1.5 * code.amplitude, "{peak}");
        let end = code.lead_in + code.dot_hold;
        let after: Vec<_> = tr.samples().iter().filter(|s| s.t > end + 3.0).collect();
        assert!(after.iter().all(|s| s.x.abs() < 0.05));
        // one excursion: a single crossing up through half amplitude
        let above: Vec<bool> = tr.samples().iter().map(|s| s.x > code.amplitude / 2.0).collect();
        assert_eq!(above.windows(2).filter(|w| !w[0] && w[1]).count(), 1);
    }

    #[test]
    fn red_light() {
        let field = ForceField {
            obstacles: vec![Obstacle { position: Vec2::new(0.0, 40.0), strength: 200.0, range: 2.0, stop: true }],
            ..Default::default()
        };
        let tr = simulate_field(cruising(), &field, 0.02, 60.0).unwrap();
        let s = tr.samples();
        assert!(s.windows(2).all(|w| w[1].y >= w[0].y));
        let v_end = (s[s.len() - 1].y - s[s.len() - 2].y) / 0.02;
        assert!(v_end.abs() < 1e-3, "{v_end}");
        assert!(s.last().unwrap().y < 40.0);
    }

    #[test]
    fn speed_limit() {
        let field = ForceField {
            goal: GoalParams { desired_speed: 8.0, ..Default::default() },
            obstacles: vec![Obstacle { position: Vec2::new(0.0, -0.5), strength: 500.0, range: 1.0, stop: false }],
            ..Default::default()
        };
        let tr = simulate_field(cruising(), &field, 0.02, 5.0).unwrap();
        for w in tr.samples().windows(2) {
            let v = Vec2::new(w[1].x - w[0].x, w[1].y - w[0].y).norm() / 0.02;
            assert!(v <= 8.0 + 1e-9);
        }
    }

    #[test]
    fn zero_forces_fixed_point() {
        let field = ForceField {
            goal: GoalParams { k_speed: 0.0, desired_speed: 0.0, ..Default::default() },
            ..Default::default()
        };
        let still = RobotState::new(Vec2::new(1.0, 2.0), Vec2::ZERO);
        let tr = simulate_field(still, &field, 0.05, 3.0).unwrap();
        assert!(tr.samples().iter().all(|s| s.x == 1.0 && s.y == 2.0));
    }

    #[test]
    fn density_cap() {
        let msg = text_to_morse("SOS").unwrap();
        let err = simulate(cruising(), &ForceField::default(), &msg, &DriftCode::default(), 0.02, 60.0).unwrap_err();
        assert_eq!(err, MotionError::ScheduleTooLong { needed: 12.0, allowed: 6.0 });
        assert!(simulate(cruising(), &ForceField::default(), &msg, &DriftCode::default(), 0.02, 120.0).is_ok());
    }

    #[test]
    fn bad_step() {
        let msg = MorseSequence::new(vec![]).unwrap();
        let code = DriftCode::default();
        assert!(simulate(cruising(), &ForceField::default(), &msg, &code, 0.2, 10.0).is_err());
        assert!(simulate(cruising(), &ForceField::default(), &msg, &code, 0.0, 10.0).is_err());
    }
}
