//! Degraded, indirect observation: what a remote receiver actually sees of a
//! carrier after sampling, sensor noise, pixel quantization and line of sight.

use rand::RngCore;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::message::MorseSequence;
use crate::motion::{decode_trajectory, DriftCode, Trajectory2D, TrajectorySample, Vec2};
use crate::rng::{seeded, substream};
use crate::timing::{EventTimeline, Utterance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObserverError {
    #[error("outside the model's domain: {0}")]
    DomainError(String),
    #[error("invalid sensor spec: {0}")]
    InvalidSpec(String),
    #[error("empty trajectory")]
    EmptyTrajectory,
    #[error("jitter moved event {index} onto or before its predecessor")]
    EventOrderViolated { index: usize },
    #[error("unknown sensor preset {0:?}")]
    UnknownPreset(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensorKind {
    GpsDirect,
    GpsDgps,
    GpsRtk,
    Camera,
    AudioOnset,
    Custom,
}

/// Sampling rate (Hz), Gaussian noise and quantization step in the units of
/// the observed quantity. A quantization of 0 disables snapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorSpec {
    pub kind: SensorKind,
    pub rate: f64,
    pub noise_sigma: f64,
    #[serde(default)]
    pub quantization: f64,
    #[serde(default)]
    pub seed: u64,
}

/// Horizontal field of view and resolution of the dashcam preset.
pub const DASHCAM_FOV_DEG: f64 = 130.0;
pub const DASHCAM_PIXELS: u32 = 1920;
pub const DASHCAM_DISTANCE: f64 = 10.0;

pub const PRESET_NAMES: [&str; 6] =
    ["gps_direct", "gps_dgps", "gps_rtk", "camera_dashcam", "camera_markers", "audio_onset"];

impl SensorSpec {
    pub fn validate(&self) -> Result<(), ObserverError> {
        if !(self.rate > 0.0 && self.rate.is_finite()) {
            return Err(ObserverError::InvalidSpec("rate must be positive".into()));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(ObserverError::InvalidSpec("noise sigma must be non-negative".into()));
        }
        if !(self.quantization >= 0.0 && self.quantization.is_finite()) {
            return Err(ObserverError::InvalidSpec("quantization must be non-negative".into()));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SensorSpec { seed, ..self }
    }

    fn preset(kind: SensorKind, rate: f64, noise_sigma: f64, quantization: f64) -> Self {
        SensorSpec { kind, rate, noise_sigma, quantization, seed: 0 }
    }

    pub fn gps_direct() -> Self {
        Self::preset(SensorKind::GpsDirect, 5.0, 5.0, 0.0)
    }

    pub fn gps_dgps() -> Self {
        Self::preset(SensorKind::GpsDgps, 5.0, 0.4, 0.0)
    }

    pub fn gps_rtk() -> Self {
        Self::preset(SensorKind::GpsRtk, 5.0, 0.02, 0.0)
    }

    /// 30 fps, noiseless, one pixel of motion at the dashcam geometry.
    pub fn camera_dashcam() -> Self {
        let q = pixel_resolution(DASHCAM_FOV_DEG.to_radians(), DASHCAM_DISTANCE, DASHCAM_PIXELS)
            .expect("constant geometry is valid");
        Self::preset(SensorKind::Camera, 30.0, 0.0, q)
    }

    /// Indoor marker tracking at 1 mm.
    pub fn camera_markers() -> Self {
        Self::preset(SensorKind::Custom, 30.0, 0.0, 0.001)
    }

    pub fn audio_onset() -> Self {
        Self::preset(SensorKind::AudioOnset, 40.0, 0.0, 1.0 / 40.0)
    }

    pub fn by_name(name: &str) -> Result<Self, ObserverError> {
        Ok(match name {
            "gps_direct" => Self::gps_direct(),
            "gps_dgps" => Self::gps_dgps(),
            "gps_rtk" => Self::gps_rtk(),
            "camera_dashcam" | "camera" => Self::camera_dashcam(),
            "camera_markers" => Self::camera_markers(),
            "audio_onset" => Self::audio_onset(),
            _ => return Err(ObserverError::UnknownPreset(name.into())),
        })
    }
}

/// Smallest lateral motion that changes one pixel for a pinhole camera with
/// horizontal field of view `fov` (radians) at `distance` metres.
pub fn pixel_resolution(fov: f64, distance: f64, pixels: u32) -> Result<f64, ObserverError> {
    if !(fov > 0.0 && fov < std::f64::consts::PI) {
        return Err(ObserverError::DomainError(format!("field of view {fov} rad outside (0, pi)")));
    }
    if !(distance > 0.0 && distance.is_finite()) {
        return Err(ObserverError::DomainError(format!("distance {distance} must be positive")));
    }
    if pixels == 0 {
        return Err(ObserverError::DomainError("need at least one pixel".into()));
    }
    Ok(2.0 * distance * (fov / 2.0).tan() / pixels as f64)
}

fn snap(v: f64, q: f64) -> f64 {
    if q > 0.0 {
        (v / q).round() * q
    } else {
        v
    }
}

/// Samples `traj` at `t0 + k / rate`, adds seeded per-axis Gaussian noise and
/// snaps to the quantization grid.
pub fn observe_trajectory(traj: &Trajectory2D, spec: &SensorSpec) -> Result<Trajectory2D, ObserverError> {
    spec.validate()?;
    let (Some(t0), Some(t1)) = (traj.start(), traj.end()) else {
        return Err(ObserverError::EmptyTrajectory);
    };
    let n = ((t1 - t0) * spec.rate + 1e-9).floor() as usize + 1;
    let noise = Normal::new(0.0, spec.noise_sigma).expect("validated sigma");
    let mut rng = seeded(spec.seed);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let t = t0 + k as f64 / spec.rate;
        let p = traj.position_at(t).expect("non-empty trajectory");
        let (dx, dy) =
            if spec.noise_sigma > 0.0 { (noise.sample(&mut rng), noise.sample(&mut rng)) } else { (0.0, 0.0) };
        out.push(TrajectorySample { t, x: snap(p.x + dx, spec.quantization), y: snap(p.y + dy, spec.quantization) });
    }
    Trajectory2D::new(out).map_err(|e| ObserverError::InvalidSpec(e.to_string()))
}

/// Perturbs each onset by seeded Gaussian jitter, keeping durations.
pub fn observe_timeline(
    timeline: &EventTimeline,
    jitter_sigma: f64,
    seed: u64,
) -> Result<EventTimeline, ObserverError> {
    if !(jitter_sigma >= 0.0 && jitter_sigma.is_finite()) {
        return Err(ObserverError::InvalidSpec("jitter sigma must be non-negative".into()));
    }
    let noise = Normal::new(0.0, jitter_sigma).expect("validated sigma");
    let mut rng = seeded(seed);
    let events: Vec<Utterance> = timeline
        .events()
        .iter()
        .map(|e| Utterance {
            onset: e.onset + if jitter_sigma > 0.0 { noise.sample(&mut rng) } else { 0.0 },
            duration: e.duration,
        })
        .collect();
    if let Some(i) = events.windows(2).position(|w| !(w[1].onset >= w[0].end() && w[1].onset > w[0].onset)) {
        return Err(ObserverError::EventOrderViolated { index: i + 1 });
    }
    EventTimeline::new(events).map_err(|e| ObserverError::InvalidSpec(e.to_string()))
}

/// Observes `traj` `trials` times through `spec`, trial `k` seeded from
/// substream `k` of `seed`, and counts how often the drift decoder returns
/// `expected`.
pub fn drift_decode_trials(
    traj: &Trajectory2D,
    centerline: f64,
    code: &DriftCode,
    expected: &MorseSequence,
    spec: &SensorSpec,
    trials: u64,
    seed: u64,
) -> Result<u64, ObserverError> {
    spec.validate()?;
    (0..trials)
        .into_par_iter()
        .map(|k| {
            let trial = spec.with_seed(substream(seed, k).next_u64());
            let seen = observe_trajectory(traj, &trial)?;
            Ok(decode_trajectory(&seen, centerline, code).is_ok_and(|m| &m == expected) as u64)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Vec2,
    pub b: Vec2,
}

/// Where an observer stands and what it can see: a cone of `half_angle`
/// around `facing` (radians from +x), out to `max_range`, blocked by
/// occluding segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObserverPose {
    pub position: Vec2,
    pub facing: f64,
    pub half_angle: f64,
    pub max_range: f64,
    #[serde(default)]
    pub occluders: Vec<Segment>,
}

impl ObserverPose {
    pub fn validate(&self) -> Result<(), ObserverError> {
        if !(self.half_angle > 0.0 && self.half_angle <= std::f64::consts::PI) {
            return Err(ObserverError::DomainError("half-angle must lie in (0, pi]".into()));
        }
        if !(self.max_range > 0.0) {
            return Err(ObserverError::DomainError("max range must be positive".into()));
        }
        Ok(())
    }
}

fn cross(o: Vec2, a: Vec2, b: Vec2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn on_segment(p: Vec2, a: Vec2, b: Vec2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segment intersection, touching endpoints included.
pub fn segments_intersect(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(p1, q1, q2))
        || (d2 == 0.0 && on_segment(p2, q1, q2))
        || (d3 == 0.0 && on_segment(q1, p1, p2))
        || (d4 == 0.0 && on_segment(q2, p1, p2))
}

pub fn visible(sender: Vec2, pose: &ObserverPose) -> bool {
    let d = sender - pose.position;
    let dist = d.norm();
    if dist > pose.max_range {
        return false;
    }
    if dist > 0.0 {
        let bearing = d.y.atan2(d.x) - pose.facing;
        let off = bearing.sin().atan2(bearing.cos()).abs();
        if off > pose.half_angle {
            return false;
        }
    }
    !pose.occluders.iter().any(|s| segments_intersect(pose.position, sender, s.a, s.b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn line(n: usize, dt: f64) -> Trajectory2D {
        Trajectory2D::new(
            (0..n)
                .map(|i| {
                    let t = i as f64 * dt;
                    TrajectorySample { t, x: (t * 0.7).sin(), y: 5.0 * t }
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn dashcam_resolution() {
        let q = pixel_resolution(130f64.to_radians(), 10.0, 1920).unwrap();
        // tan 65° = 2.1445069205095586
        assert!((q - 20.0 * 2.1445069205095586 / 1920.0).abs() < 1e-12, "{q}");
        assert!((q - 0.02234).abs() < 1e-5);
        let q2 = pixel_resolution(130f64.to_radians(), 20.0, 1920).unwrap();
        assert!((q2 - 2.0 * q).abs() < 1e-15);
        assert_eq!(SensorSpec::camera_dashcam().quantization, q);
        assert_eq!(SensorSpec::camera_dashcam().rate, 30.0);
    }

    #[test]
    fn resolution_domain() {
        assert!(pixel_resolution(PI, 10.0, 1920).is_err());
        assert!(pixel_resolution(1.0, 0.0, 1920).is_err());
        assert!(pixel_resolution(1.0, 1.0, 0).is_err());
    }

    #[test]
    fn presets() {
        let rtk = SensorSpec::by_name("gps_rtk").unwrap();
        assert_eq!((rtk.noise_sigma, rtk.rate), (0.02, 5.0));
        assert_eq!(SensorSpec::gps_direct().noise_sigma, 5.0);
        assert_eq!(SensorSpec::gps_dgps().noise_sigma, 0.4);
        for name in PRESET_NAMES {
            SensorSpec::by_name(name).unwrap().validate().unwrap();
        }
        assert!(SensorSpec::by_name("sonar").is_err());
    }

    #[test]
    fn identity_channel() {
        let tr = line(200, 0.05);
        let spec = SensorSpec { kind: SensorKind::Custom, rate: 20.0, noise_sigma: 0.0, quantization: 0.0, seed: 0 };
        let seen = observe_trajectory(&tr, &spec).unwrap();
        assert_eq!(seen.len(), tr.len());
        for (a, b) in seen.samples().iter().zip(tr.samples()) {
            assert!((a.t - b.t).abs() < 1e-9 && (a.x - b.x).abs() < 1e-9 && (a.y - b.y).abs() < 1e-9);
        }
    }

    #[test]
    fn noise_is_seeded() {
        let tr = line(100, 0.1);
        let spec = SensorSpec::gps_dgps().with_seed(9);
        assert_eq!(observe_trajectory(&tr, &spec).unwrap(), observe_trajectory(&tr, &spec).unwrap());
        assert_ne!(observe_trajectory(&tr, &spec).unwrap(), observe_trajectory(&tr, &spec.with_seed(10)).unwrap());
    }

    #[test]
    fn quantization_is_idempotent() {
        let tr = line(100, 0.1);
        let spec = SensorSpec::camera_markers();
        let once = observe_trajectory(&tr, &spec).unwrap();
        let twice = observe_trajectory(&once, &spec).unwrap();
        for (a, b) in once.samples().iter().zip(twice.samples()) {
            assert!((a.x - b.x).abs() < 1e-12 && (a.y - b.y).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_trajectory() {
        let empty = Trajectory2D::new(vec![]).unwrap();
        assert_eq!(observe_trajectory(&empty, &SensorSpec::gps_rtk()), Err(ObserverError::EmptyTrajectory));
    }

    fn pose() -> ObserverPose {
        ObserverPose {
            position: Vec2::ZERO,
            facing: FRAC_PI_2,
            half_angle: FRAC_PI_4,
            max_range: 20.0,
            occluders: vec![],
        }
    }

    #[test]
    fn visibility_cone() {
        let p = pose();
        assert!(visible(Vec2::new(0.0, 10.0), &p));
        assert!(!visible(Vec2::new(0.0, -10.0), &p));
        assert!(!visible(Vec2::new(10.0, 1.0), &p));
        assert!(!visible(Vec2::new(0.0, 25.0), &p));
    }

    #[test]
    fn occluded() {
        let mut p = pose();
        p.occluders.push(Segment { a: Vec2::new(-1.0, 5.0), b: Vec2::new(1.0, 5.0) });
        assert!(!visible(Vec2::new(0.0, 10.0), &p));
        assert!(visible(Vec2::new(0.0, 4.0), &p));
        assert!(visible(Vec2::new(3.0, 10.0), &p));
    }

    #[test]
    fn timeline_jitter() {
        let tl =
            EventTimeline::new(vec![Utterance { onset: 0.0, duration: 0.3 }, Utterance { onset: 1.0, duration: 0.3 }])
                .unwrap();
        assert_eq!(observe_timeline(&tl, 0.0, 1).unwrap(), tl);
        let a = observe_timeline(&tl, 0.01, 5).unwrap();
        assert_eq!(a, observe_timeline(&tl, 0.01, 5).unwrap());
        assert_ne!(a, tl);
        let tight = EventTimeline::new(vec![
            Utterance { onset: 0.0, duration: 0.3 },
            Utterance { onset: 0.301, duration: 0.3 },
        ])
        .unwrap();
        let violated =
            (0..50).any(|s| matches!(observe_timeline(&tight, 0.5, s), Err(ObserverError::EventOrderViolated { .. })));
        assert!(violated);
    }
}
