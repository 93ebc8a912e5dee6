use serde::{Deserialize, Serialize};

use super::{EventTimeline, TimingError, Utterance};
use crate::carriers::PcmClip;

/// Hysteresis onset detector over a volume envelope in full-scale units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OnsetDetectorConfig {
    /// Envelope samples per second.
    pub rate: f64,
    pub high_threshold: f64,
    pub low_threshold: f64,
    /// Shortest segment kept as speech, seconds.
    pub min_speech: f64,
}

impl Default for OnsetDetectorConfig {
    fn default() -> Self {
        OnsetDetectorConfig { rate: 40.0, high_threshold: 0.1, low_threshold: 0.05, min_speech: 0.15 }
    }
}

impl OnsetDetectorConfig {
    pub fn validate(&self) -> Result<(), TimingError> {
        if !(self.rate > 0.0 && self.rate.is_finite()) {
            return Err(TimingError::InvalidCode("envelope rate must be positive".into()));
        }
        if !(self.low_threshold < self.high_threshold) {
            return Err(TimingError::InvalidCode("low threshold must be below high threshold".into()));
        }
        if !(self.min_speech > 0.0) {
            return Err(TimingError::InvalidCode("minimum speech length must be positive".into()));
        }
        Ok(())
    }
}

/// Speech starts when the envelope rises above the high threshold and ends
/// when it drops below the low one. Segments shorter than `min_speech` are
/// discarded. Sample `i` sits at `i / rate` seconds; a segment still open at
/// the end closes at `len / rate`.
pub fn detect_onsets(envelope: &[f64], config: &OnsetDetectorConfig) -> Result<EventTimeline, TimingError> {
    config.validate()?;
    let at = |i: usize| i as f64 / config.rate;
    let mut events = Vec::new();
    let mut keep = |start: f64, end: f64| {
        let duration = end - start;
        if duration >= config.min_speech - 1e-9 {
            events.push(Utterance { onset: start, duration });
        }
    };

    let mut open: Option<f64> = None;
    for (i, &v) in envelope.iter().enumerate() {
        match open {
            None if v > config.high_threshold => open = Some(at(i)),
            Some(start) if v < config.low_threshold => {
                keep(start, at(i));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        keep(start, at(envelope.len()));
    }
    EventTimeline::new(events)
}

/// RMS volume per frame, as a fraction of full scale. Frames are 25 ms long
/// and start every `1 / rate` seconds.
pub fn rms_envelope(clip: &PcmClip, rate: f64) -> Vec<f64> {
    let sr = clip.sample_rate() as f64;
    let hop = ((sr / rate).round() as usize).max(1);
    let window = ((0.025 * sr).round() as usize).max(1);
    let samples = clip.samples();
    (0..samples.len().div_ceil(hop))
        .map(|i| {
            let frame = &samples[i * hop..(i * hop + window).min(samples.len())];
            let energy: f64 = frame.iter().map(|&s| (s as f64 / 32768.0).powi(2)).sum();
            (energy / frame.len() as f64).sqrt()
        })
        .collect()
}

/// Ideal envelope of a timeline: `level` inside utterances, 0 elsewhere,
/// sampled at `rate` until `tail` seconds past the last utterance.
pub fn render_envelope(timeline: &EventTimeline, rate: f64, level: f64, tail: f64) -> Vec<f64> {
    let n = ((timeline.end() + tail) * rate).ceil() as usize;
    let mut env = vec![0.0; n];
    for e in timeline.events() {
        let first = (e.onset * rate).ceil() as usize;
        for (i, v) in env.iter_mut().enumerate().skip(first) {
            if i as f64 / rate >= e.end() {
                break;
            }
            *v = level;
        }
    }
    env
}

/// Voiced-sounding tone bursts (200 Hz with two harmonics, about 0.116 RMS)
/// for each utterance, silence elsewhere.
pub fn synthesize_utterances(timeline: &EventTimeline, sample_rate: u32, tail: f64) -> PcmClip {
    let sr = sample_rate as f64;
    let n = ((timeline.end() + tail) * sr).ceil() as usize;
    let mut samples = vec![0i16; n];
    let tau = std::f64::consts::TAU;
    for e in timeline.events() {
        let first = (e.onset * sr).ceil() as usize;
        let last = ((e.end() * sr).ceil() as usize).min(n);
        for (i, s) in samples.iter_mut().enumerate().take(last).skip(first) {
            let t = i as f64 / sr;
            let v = 0.15 * (tau * 200.0 * t).sin() + 0.06 * (tau * 400.0 * t).sin() + 0.03 * (tau * 600.0 * t).sin();
            *s = (v * 32767.0).round() as i16;
        }
    }
    PcmClip::new(sample_rate, samples).expect("positive sample rate")
}
