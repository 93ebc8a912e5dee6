use serde::{Deserialize, Serialize};
use stegabot_core::formats::{csv, wav};
use stegabot_core::message::{morse_to_text, text_to_morse, MorseSequence};
use stegabot_core::motion::{
    decode_trajectory, simulate, DriftCode, DriftSchedule, ForceField, GoalParams, Obstacle, RobotState, Vec2,
};
use stegabot_core::observer::{observe_timeline, observe_trajectory, SensorSpec};
use stegabot_core::rng::seeded;
use stegabot_core::timing::{
    delays_decode, delays_encode, detect_onsets, rms_envelope, synthesize_utterances, DelayCode, OnsetDetectorConfig,
};

use crate::io::{self, render};
use crate::{CliError, Format, SimulateArgs};

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "channel", rename_all = "snake_case")]
pub enum Scenario {
    Motion(MotionScenario),
    Timing(TimingScenario),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SensorChoice {
    Preset(String),
    Spec(SensorSpec),
}

impl SensorChoice {
    pub fn resolve(&self, seed: u64) -> Result<SensorSpec, CliError> {
        let spec = match self {
            SensorChoice::Preset(name) => SensorSpec::by_name(name)?,
            SensorChoice::Spec(s) => *s,
        };
        Ok(spec.with_seed(seed))
    }
}

fn default_dt() -> f64 {
    0.02
}

#[derive(Debug, Clone, Deserialize)]
pub struct MotionScenario {
    pub message: String,
    pub seed: u64,
    /// Defaults to the centerline at the desired speed.
    #[serde(default)]
    pub initial: Option<RobotState>,
    #[serde(default)]
    pub goal: GoalParams,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    #[serde(default)]
    pub code: DriftCode,
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Defaults to the shortest run the density cap allows, plus settling.
    #[serde(default)]
    pub duration: Option<f64>,
    /// Observation channel; the decoder reads the true path when absent.
    #[serde(default)]
    pub sensor: Option<SensorChoice>,
}

fn default_rate() -> u32 {
    16_000
}

#[derive(Debug, Clone, Deserialize)]
pub struct TimingScenario {
    pub message: String,
    pub seed: u64,
    /// Utterance lengths; drawn from the seed when absent.
    #[serde(default)]
    pub durations: Option<Vec<f64>>,
    /// Number of utterances when durations are drawn; defaults to one per gap needed.
    #[serde(default)]
    pub utterances: Option<usize>,
    #[serde(default)]
    pub code: DelayCode,
    #[serde(default)]
    pub detector: OnsetDetectorConfig,
    /// Onset jitter applied before rendering audio, seconds.
    #[serde(default)]
    pub jitter_sigma: f64,
    #[serde(default = "default_rate")]
    pub sample_rate: u32,
}

#[derive(Debug, Serialize)]
pub struct DecodeOutcome {
    pub decoded_morse: Option<String>,
    pub decoded_text: Option<String>,
    pub success: bool,
    pub error: Option<String>,
}

impl DecodeOutcome {
    pub fn new<E: std::fmt::Display>(sent: &MorseSequence, decoded: Result<MorseSequence, E>) -> Self {
        match decoded {
            Ok(m) => DecodeOutcome {
                decoded_text: morse_to_text(&m).ok(),
                success: &m == sent,
                decoded_morse: Some(m.to_string()),
                error: None,
            },
            Err(e) => {
                DecodeOutcome { decoded_morse: None, decoded_text: None, success: false, error: Some(e.to_string()) }
            }
        }
    }
}

#[derive(Debug, Serialize)]
struct MotionReport {
    channel: &'static str,
    message: String,
    morse: String,
    duration: f64,
    drift_time: f64,
    drift_fraction: f64,
    max_lateral_offset: f64,
    sensor: Option<SensorSpec>,
    #[serde(flatten)]
    outcome: DecodeOutcome,
}

#[derive(Debug, Serialize)]
struct TimingReport {
    channel: &'static str,
    message: String,
    morse: String,
    utterances: usize,
    sent_gaps: Vec<f64>,
    detected_gaps: Vec<f64>,
    #[serde(flatten)]
    outcome: DecodeOutcome,
}

/// Shortest run that respects the density cap and lets the last mark settle.
pub fn default_duration(schedule: &DriftSchedule, code: &DriftCode) -> f64 {
    (schedule.active_time() / code.density).max(schedule.end() + 5.0).ceil()
}

pub fn run(a: &SimulateArgs, fmt: Format) -> Result<String, CliError> {
    let scenario: Scenario = io::read_json(&a.config)?;
    io::create_dir(&a.out)?;
    match scenario {
        Scenario::Motion(mut s) => {
            s.seed = a.seed.unwrap_or(s.seed);
            run_motion(&s, a, fmt)
        }
        Scenario::Timing(mut s) => {
            s.seed = a.seed.unwrap_or(s.seed);
            run_timing(&s, a, fmt)
        }
    }
}

fn run_motion(s: &MotionScenario, a: &SimulateArgs, fmt: Format) -> Result<String, CliError> {
    let msg = text_to_morse(&s.message)?;
    let schedule = DriftSchedule::new(&msg, &s.code)?;
    let duration = s.duration.unwrap_or_else(|| default_duration(&schedule, &s.code));
    let initial =
        s.initial.unwrap_or(RobotState::new(Vec2::new(s.goal.centerline, 0.0), Vec2::new(0.0, s.goal.desired_speed)));
    let field = ForceField { goal: s.goal, obstacles: s.obstacles.clone(), com: None };
    let truth = simulate(initial, &field, &msg, &s.code, s.dt, duration)?;
    io::write_bytes(&a.out.join("trajectory.csv"), csv::write_trajectory(&truth, None).as_bytes())?;

    let sensor = s.sensor.as_ref().map(|c| c.resolve(s.seed)).transpose()?;
    let seen = match &sensor {
        Some(spec) => {
            let seen = observe_trajectory(&truth, spec)?;
            io::write_bytes(&a.out.join("observed.csv"), csv::write_trajectory(&seen, None).as_bytes())?;
            seen
        }
        None => truth.clone(),
    };
    let outcome = DecodeOutcome::new(&msg, decode_trajectory(&seen, s.goal.centerline, &s.code));
    let report = MotionReport {
        channel: "motion",
        message: s.message.clone(),
        morse: msg.to_string(),
        duration,
        drift_time: schedule.active_time(),
        drift_fraction: schedule.active_time() / duration,
        max_lateral_offset: truth.samples().iter().map(|p| (p.x - s.goal.centerline).abs()).fold(0.0, f64::max),
        sensor,
        outcome,
    };
    let json = io::to_json(&report);
    io::write_bytes(&a.out.join("report.json"), json.as_bytes())?;
    Ok(render(&report, fmt))
}

/// Utterance lengths for a timing scenario: explicit, or seeded in [0.25, 0.45) s.
pub fn utterance_durations(s: &TimingScenario, symbols: usize) -> Vec<f64> {
    use rand::Rng;
    if let Some(d) = &s.durations {
        return d.clone();
    }
    let n = s.utterances.unwrap_or(symbols + 1);
    let mut rng = seeded(s.seed);
    (0..n).map(|_| (rng.random_range(250..450) as f64) / 1000.0).collect()
}

fn run_timing(s: &TimingScenario, a: &SimulateArgs, fmt: Format) -> Result<String, CliError> {
    let msg = text_to_morse(&s.message)?;
    let durations = utterance_durations(s, msg.len());
    let sent = delays_encode(&durations, &msg, &s.code)?;
    io::write_bytes(&a.out.join("timeline.csv"), csv::write_timeline(&sent, None).as_bytes())?;
    let spoken = observe_timeline(&sent, s.jitter_sigma, s.seed)?;
    io::write_bytes(&a.out.join("observed_timeline.csv"), csv::write_timeline(&spoken, None).as_bytes())?;

    let audio = synthesize_utterances(&spoken, s.sample_rate, 0.5);
    io::write_bytes(&a.out.join("utterances.wav"), &wav::encode(&wav::WavFile::from_clip(audio.clone())))?;
    let envelope = rms_envelope(&audio, s.detector.rate);
    io::write_bytes(&a.out.join("envelope.csv"), csv::write_envelope(s.detector.rate, &envelope, Some(6)).as_bytes())?;
    let detected = detect_onsets(&envelope, &s.detector)?;
    io::write_bytes(&a.out.join("detected.csv"), csv::write_timeline(&detected, None).as_bytes())?;

    let report = TimingReport {
        channel: "timing",
        message: s.message.clone(),
        morse: msg.to_string(),
        utterances: sent.len(),
        sent_gaps: sent.gaps(),
        detected_gaps: detected.gaps(),
        outcome: DecodeOutcome::new(&msg, delays_decode(&detected, &s.code)),
    };
    let json = io::to_json(&report);
    io::write_bytes(&a.out.join("report.json"), json.as_bytes())?;
    Ok(render(&report, fmt))
}
