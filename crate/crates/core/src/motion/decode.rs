use serde::{Deserialize, Serialize};

use super::drift::DriftCode;
use super::{MotionError, Trajectory2D};
use crate::message::{MorseSequence, MorseSymbol};

/// Uniform grid used before thresholding, Hz.
pub const RESAMPLE_RATE: f64 = 10.0;

/// A stretch of time spent more than half the amplitude off the centerline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub start: f64,
    pub end: f64,
}

impl Pulse {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

/// Thresholded lateral excursions. Pulses separated by less than a third of a
/// dot are merged, then pulses shorter than that are dropped, so that
/// observation noise near the threshold does not split or invent marks.
pub fn lateral_pulses(traj: &Trajectory2D, centerline: f64, code: &DriftCode) -> Result<Vec<Pulse>, MotionError> {
    code.validate()?;
    let (Some(t0), Some(t1)) = (traj.start(), traj.end()) else {
        return Err(MotionError::InvalidTrajectory("need at least 2 samples".into()));
    };
    if traj.len() < 2 {
        return Err(MotionError::InvalidTrajectory("need at least 2 samples".into()));
    }
    let step = 1.0 / RESAMPLE_RATE;
    let n = ((t1 - t0) * RESAMPLE_RATE).floor() as usize + 1;
    let half = code.amplitude / 2.0;

    let mut raw: Vec<Pulse> = Vec::new();
    let mut open: Option<f64> = None;
    for i in 0..n {
        let t = t0 + i as f64 * step;
        let p = traj.position_at(t).expect("non-empty trajectory");
        let above = (p.x - centerline).abs() > half;
        match (open, above) {
            (None, true) => open = Some(t),
            (Some(s), false) => {
                raw.push(Pulse { start: s, end: t });
                open = None;
            }
            _ => {}
        }
    }
    if let Some(s) = open {
        raw.push(Pulse { start: s, end: t0 + n as f64 * step });
    }

    let glitch = 0.3 * code.dot_hold;
    let mut merged: Vec<Pulse> = Vec::with_capacity(raw.len());
    for p in raw {
        match merged.last_mut() {
            Some(last) if p.start - last.end < glitch => last.end = p.end,
            _ => merged.push(p),
        }
    }
    merged.retain(|p| p.duration() >= glitch);
    Ok(merged)
}

/// Reads Morse from lateral drift: pulses shorter than 1.5 dot holds are dots,
/// pauses of at least 3 dot holds separate letters, and pauses past the
/// midpoint of the letter and word gaps separate words.
pub fn decode_trajectory(traj: &Trajectory2D, centerline: f64, code: &DriftCode) -> Result<MorseSequence, MotionError> {
    let pulses = lateral_pulses(traj, centerline, code)?;
    if pulses.is_empty() {
        return Err(MotionError::NoPulsesFound);
    }
    let dash_at = 1.5 * code.dot_hold;
    let letter_at = 3.0 * code.dot_hold;
    let word_at = 0.5 * (code.letter_gap + code.word_gap);
    let mut symbols = Vec::with_capacity(2 * pulses.len());
    for (i, p) in pulses.iter().enumerate() {
        if i > 0 {
            let gap = p.start - pulses[i - 1].end;
            if gap >= word_at {
                symbols.push(MorseSymbol::WordGap);
            } else if gap >= letter_at {
                symbols.push(MorseSymbol::LetterGap);
            }
        }
        symbols.push(if p.duration() < dash_at { MorseSymbol::Dot } else { MorseSymbol::Dash });
    }
    Ok(MorseSequence::new(symbols).expect("gaps only between marks"))
}
