use serde::{Deserialize, Serialize};

use super::force::{goal_force, social_force, Communication, GoalParams, Obstacle};
use super::{MotionError, RobotState, Vec2};
use crate::message::{MorseSequence, MorseSymbol};

/// Timing and size of the lateral drift pulses. Times in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DriftCode {
    /// Target steady-state lateral offset, metres.
    pub amplitude: f64,
    pub dot_hold: f64,
    pub dash_hold: f64,
    /// Pause between marks of one letter.
    pub inter_symbol: f64,
    pub letter_gap: f64,
    pub word_gap: f64,
    /// Cruise time before the first mark.
    pub lead_in: f64,
    /// Largest allowed fraction of the run spent drifting.
    pub density: f64,
    /// +1 drifts toward +x, −1 toward −x.
    pub side: f64,
}

impl Default for DriftCode {
    fn default() -> Self {
        DriftCode {
            amplitude: 0.3,
            dot_hold: 1.0,
            dash_hold: 2.0,
            inter_symbol: 1.0,
            letter_gap: 4.0,
            word_gap: 8.0,
            lead_in: 2.0,
            density: 0.1,
            side: 1.0,
        }
    }
}

impl DriftCode {
    pub fn validate(&self) -> Result<(), MotionError> {
        let bad = |m: &str| Err(MotionError::InvalidParameter(m.into()));
        if !(self.amplitude > 0.0) {
            return bad("drift amplitude must be positive");
        }
        if !(0.0 < self.dot_hold && self.dot_hold < self.dash_hold) {
            return bad("need 0 < dot_hold < dash_hold");
        }
        if !(self.inter_symbol > 0.0 && self.letter_gap > self.inter_symbol && self.word_gap > self.letter_gap) {
            return bad("need 0 < inter_symbol < letter_gap < word_gap");
        }
        if !(self.lead_in >= 0.0) {
            return bad("lead-in must be non-negative");
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return bad("density must lie in (0, 1]");
        }
        if self.side != 1.0 && self.side != -1.0 {
            return bad("side must be +1 or -1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftWindow {
    pub start: f64,
    pub end: f64,
    pub symbol: MorseSymbol,
}

/// When the virtual obstacle is present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DriftSchedule {
    windows: Vec<DriftWindow>,
}

impl DriftSchedule {
    pub fn new(msg: &MorseSequence, code: &DriftCode) -> Result<Self, MotionError> {
        code.validate()?;
        let mut windows = Vec::new();
        let mut t = code.lead_in;
        let mut pending = 0.0;
        for &s in msg.symbols() {
            match s {
                MorseSymbol::Dot | MorseSymbol::Dash => {
                    t += pending;
                    let hold = if s == MorseSymbol::Dot { code.dot_hold } else { code.dash_hold };
                    windows.push(DriftWindow { start: t, end: t + hold, symbol: s });
                    t += hold;
                    pending = code.inter_symbol;
                }
                MorseSymbol::LetterGap => pending = code.letter_gap,
                MorseSymbol::WordGap => pending = code.word_gap,
            }
        }
        Ok(DriftSchedule { windows })
    }

    pub fn windows(&self) -> &[DriftWindow] {
        &self.windows
    }

    pub fn active_at(&self, t: f64) -> Option<&DriftWindow> {
        let i = self.windows.partition_point(|w| w.end <= t);
        self.windows.get(i).filter(|w| w.start <= t)
    }

    /// Total time with the obstacle present.
    pub fn active_time(&self) -> f64 {
        self.windows.iter().map(|w| w.end - w.start).sum()
    }

    /// End of the last mark.
    pub fn end(&self) -> f64 {
        self.windows.last().map_or(0.0, |w| w.end)
    }
}

/// Placement of the hallucinated obstacle relative to the lane: `ahead` of
/// the robot and `lateral_offset` from the centerline on the side opposite
/// the drift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VirtualObstacleGeometry {
    pub ahead: f64,
    pub lateral_offset: f64,
    pub range: f64,
}

impl Default for VirtualObstacleGeometry {
    fn default() -> Self {
        VirtualObstacleGeometry { ahead: 1.0, lateral_offset: 1.0, range: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VirtualObstacle {
    pub geometry: VirtualObstacleGeometry,
    /// Calibrated interaction force A.
    pub strength: f64,
    pub side: f64,
}

impl VirtualObstacle {
    fn place(&self, robot: &RobotState, centerline: f64) -> Obstacle {
        Obstacle {
            position: Vec2::new(
                centerline - self.side * self.geometry.lateral_offset,
                robot.position.y + self.geometry.ahead,
            ),
            strength: self.strength,
            range: self.geometry.range,
            stop: false,
        }
    }
}

/// The obstacle to add at time `t`, if a mark is being sent.
pub fn hallucinate_virtual_obstacle(
    com: &Communication,
    t: f64,
    robot: &RobotState,
    centerline: f64,
) -> Option<Obstacle> {
    com.schedule.active_at(t).map(|_| com.obstacle.place(robot, centerline))
}

/// Bisects the interaction force A so that the lateral goal force and the
/// virtual obstacle balance exactly at `amplitude` off the centerline.
pub fn calibrate_virtual_obstacle(
    code: &DriftCode,
    geometry: VirtualObstacleGeometry,
    goal: &GoalParams,
) -> Result<VirtualObstacle, MotionError> {
    code.validate()?;
    if !(geometry.range > 0.0 && geometry.ahead >= 0.0 && geometry.lateral_offset > 0.0) {
        return Err(MotionError::InvalidParameter("virtual obstacle geometry must be positive".into()));
    }
    let steady = RobotState::new(
        Vec2::new(goal.centerline + code.side * code.amplitude, 0.0),
        Vec2::new(0.0, goal.desired_speed),
    );
    let restoring = goal_force(&steady, goal).x * code.side;
    if !(restoring < 0.0) {
        return Err(MotionError::InvalidParameter("lateral gains give no restoring force to balance".into()));
    }
    // lateral push toward `side` minus the restoring pull
    let imbalance = |strength: f64| -> Result<f64, MotionError> {
        let v = VirtualObstacle { geometry, strength, side: code.side };
        let push = social_force(steady.position, &v.place(&steady, goal.centerline))?.x * code.side;
        Ok(push + restoring)
    };

    let mut lo = 0.0;
    let mut hi = 1.0;
    while imbalance(hi)? < 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(MotionError::InvalidParameter("virtual obstacle cannot reach the amplitude".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if imbalance(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    Ok(VirtualObstacle { geometry, strength: 0.5 * (lo + hi), side: code.side })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::message::text_to_morse;

    #[test]
    fn sos_schedule_layout() {
        let code = DriftCode::default();
        let s = DriftSchedule::new(&text_to_morse("SOS").unwrap(), &code).unwrap();
        assert_eq!(s.windows().len(), 9);
        assert_eq!(s.active_time(), 12.0);
        // 2 lead-in + 12 marks + 6 × 1 intra + 2 × 4 letter gaps
        assert_eq!(s.end(), 28.0);
        assert_eq!(s.windows()[3].start, 11.0);
        assert_eq!(s.windows()[3].symbol, MorseSymbol::Dash);
        assert!(s.active_at(2.5).is_some());
        assert!(s.active_at(3.0).is_none());
        assert!(s.active_at(0.0).is_none());
        assert!(s.active_at(100.0).is_none());
    }

    #[test]
    fn calibration_balances_forces() {
        let code = DriftCode::default();
        let goal = GoalParams::default();
        let v = calibrate_virtual_obstacle(&code, VirtualObstacleGeometry::default(), &goal).unwrap();
        let at_amp = RobotState::new(Vec2::new(0.3, 0.0), Vec2::new(0.0, 5.0));
        let lateral = goal_force(&at_amp, &goal).x + social_force(at_amp.position, &v.place(&at_amp, 0.0)).unwrap().x;
        assert!(lateral.abs() < 1e-9, "{lateral}");
        assert!(v.strength > 0.0);
    }

    #[test]
    fn calibration_mirrors_for_left_drift() {
        let goal = GoalParams::default();
        let right = calibrate_virtual_obstacle(&DriftCode::default(), Default::default(), &goal).unwrap();
        let left_code = DriftCode { side: -1.0, ..Default::default() };
        let left = calibrate_virtual_obstacle(&left_code, Default::default(), &goal).unwrap();
        assert!((right.strength - left.strength).abs() < 1e-9 * right.strength);
    }

    #[test]
    fn calibration_needs_restoring_force() {
        let goal = GoalParams { k_lateral: 0.0, ..Default::default() };
        assert!(calibrate_virtual_obstacle(&DriftCode::default(), Default::default(), &goal).is_err());
    }

    #[test]
    fn code_validation() {
        assert!(DriftCode { dash_hold: 0.5, ..Default::default() }.validate().is_err());
        assert!(DriftCode { density: 0.0, ..Default::default() }.validate().is_err());
        assert!(DriftCode { side: 0.5, ..Default::default() }.validate().is_err());
    }
}
