//! Morse hidden in the pauses between utterances.
//!
//! Each gap between consecutive utterances is the base pause plus an extra
//! delay chosen by the symbol it carries. The receiver recovers utterance
//! boundaries from a volume envelope ([`detect_onsets`]) and classifies the
//! gaps against the midpoints between code levels ([`delays_decode`]).

mod jitter;
mod keying;
mod onset;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::message::{MorseError, MorseSequence, MorseSymbol};

pub use jitter::{jitter_gaps, jitter_sweep, JitterStats};
pub use keying::{keying_decode, keying_encode, KeyingCode};
pub use onset::{detect_onsets, render_envelope, rms_envelope, synthesize_utterances, OnsetDetectorConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TimingError {
    #[error("invalid timeline: {0}")]
    InvalidTimeline(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("{symbols} symbols need {needed} utterances, got {available}")]
    NotEnoughUtterances { symbols: usize, needed: usize, available: usize },
    #[error("timeline has {0} events, at least 2 are needed")]
    TooFewEvents(usize),
    #[error("gap {index} of {gap:.3} s is beyond the longest code level")]
    GapOutOfRange { index: usize, gap: f64 },
    #[error(transparent)]
    Morse(#[from] MorseError),
}

/// One utterance, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Utterance {
    pub onset: f64,
    pub duration: f64,
}

impl Utterance {
    pub fn end(&self) -> f64 {
        self.onset + self.duration
    }
}

/// Utterances ordered by onset, not overlapping.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Utterance>", into = "Vec<Utterance>")]
pub struct EventTimeline {
    events: Vec<Utterance>,
}

impl EventTimeline {
    pub fn new(events: Vec<Utterance>) -> Result<Self, TimingError> {
        for (i, e) in events.iter().enumerate() {
            if !(e.onset.is_finite() && e.duration.is_finite() && e.duration >= 0.0) {
                return Err(TimingError::InvalidTimeline(format!("event {i} has a bad onset or duration")));
            }
        }
        for (i, w) in events.windows(2).enumerate() {
            if !(w[1].onset > w[0].onset) {
                return Err(TimingError::InvalidTimeline(format!(
                    "onset of event {} does not follow event {i}",
                    i + 1
                )));
            }
            if w[1].onset < w[0].end() {
                return Err(TimingError::InvalidTimeline(format!("events {i} and {} overlap", i + 1)));
            }
        }
        Ok(EventTimeline { events })
    }

    pub fn events(&self) -> &[Utterance] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Silence between consecutive utterances.
    pub fn gaps(&self) -> Vec<f64> {
        self.events.windows(2).map(|w| w[1].onset - w[0].end()).collect()
    }

    pub fn end(&self) -> f64 {
        self.events.last().map_or(0.0, Utterance::end)
    }
}

impl TryFrom<Vec<Utterance>> for EventTimeline {
    type Error = TimingError;

    fn try_from(events: Vec<Utterance>) -> Result<Self, Self::Error> {
        EventTimeline::new(events)
    }
}

impl From<EventTimeline> for Vec<Utterance> {
    fn from(t: EventTimeline) -> Self {
        t.events
    }
}

/// Pause lengths, seconds. A message gap is `base_gap` plus the symbol's
/// extra delay; unmodified gaps are exactly `base_gap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DelayCode {
    pub base_gap: f64,
    pub dot_extra: f64,
    pub dash_extra: f64,
    pub letter_extra: f64,
    pub word_extra: f64,
}

impl Default for DelayCode {
    fn default() -> Self {
        DelayCode { base_gap: 0.5, dot_extra: 0.1, dash_extra: 0.2, letter_extra: 0.4, word_extra: 0.8 }
    }
}

impl DelayCode {
    pub fn validate(&self) -> Result<(), TimingError> {
        let ordered = 0.0 < self.dot_extra
            && self.dot_extra < self.dash_extra
            && self.dash_extra < self.letter_extra
            && self.letter_extra < self.word_extra;
        if !ordered {
            return Err(TimingError::InvalidCode("extras must satisfy 0 < dot < dash < letter < word".into()));
        }
        if !(self.base_gap > 0.0 && self.base_gap.is_finite()) {
            return Err(TimingError::InvalidCode("base gap must be positive".into()));
        }
        Ok(())
    }

    pub fn extra(&self, symbol: MorseSymbol) -> f64 {
        match symbol {
            MorseSymbol::Dot => self.dot_extra,
            MorseSymbol::Dash => self.dash_extra,
            MorseSymbol::LetterGap => self.letter_extra,
            MorseSymbol::WordGap => self.word_extra,
        }
    }

    /// Extra delays at or above which a gap reads as dot, dash, letter
    /// break and word break respectively.
    pub fn thresholds(&self) -> [f64; 4] {
        [
            self.dot_extra / 2.0,
            (self.dot_extra + self.dash_extra) / 2.0,
            (self.dash_extra + self.letter_extra) / 2.0,
            (self.letter_extra + self.word_extra) / 2.0,
        ]
    }

    /// Longest extra delay still accepted as a word break.
    pub fn ceiling(&self) -> f64 {
        self.word_extra + (self.word_extra - self.letter_extra) / 2.0
    }

    /// Symbol carried by a gap, or `None` for an ordinary pause.
    pub fn classify(&self, gap: f64) -> Option<MorseSymbol> {
        let extra = gap - self.base_gap;
        let [dot, dash, letter, word] = self.thresholds();
        if extra < dot {
            None
        } else if extra < dash {
            Some(MorseSymbol::Dot)
        } else if extra < letter {
            Some(MorseSymbol::Dash)
        } else if extra < word {
            Some(MorseSymbol::LetterGap)
        } else {
            Some(MorseSymbol::WordGap)
        }
    }
}

/// Lays utterances out so that gap `k` carries symbol `k` of `msg`; gaps past
/// the message are `base_gap`. The first utterance starts at 0.
pub fn delays_encode(durations: &[f64], msg: &MorseSequence, code: &DelayCode) -> Result<EventTimeline, TimingError> {
    code.validate()?;
    let needed = msg.len() + 1;
    if durations.len() < needed {
        return Err(TimingError::NotEnoughUtterances { symbols: msg.len(), needed, available: durations.len() });
    }
    let mut events = Vec::with_capacity(durations.len());
    let mut onset = 0.0;
    for (k, &duration) in durations.iter().enumerate() {
        events.push(Utterance { onset, duration });
        let extra = msg.symbols().get(k).map_or(0.0, |&s| code.extra(s));
        onset += duration + code.base_gap + extra;
    }
    EventTimeline::new(events)
}

pub fn delays_decode(timeline: &EventTimeline, code: &DelayCode) -> Result<MorseSequence, TimingError> {
    code.validate()?;
    if timeline.len() < 2 {
        return Err(TimingError::TooFewEvents(timeline.len()));
    }
    let mut symbols = Vec::new();
    for (index, gap) in timeline.gaps().into_iter().enumerate() {
        if gap - code.base_gap > code.ceiling() {
            return Err(TimingError::GapOutOfRange { index, gap });
        }
        symbols.extend(code.classify(gap));
    }
    Ok(MorseSequence::new(symbols)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::message::text_to_morse;

    fn ms(gaps: &[f64]) -> Vec<i64> {
        gaps.iter().map(|g| (g * 1000.0).round() as i64).collect()
    }

    #[test]
    fn single_dot() {
        let dot = MorseSequence::new(vec![MorseSymbol::Dot]).unwrap();
        let tl = delays_encode(&[0.4, 0.4], &dot, &DelayCode::default()).unwrap();
        assert_eq!(ms(&tl.gaps()), vec![600]);
    }

    #[test]
    fn sos_gap_pattern() {
        let sos = text_to_morse("SOS").unwrap();
        let tl = delays_encode(&[0.3; 12], &sos, &DelayCode::default()).unwrap();
        assert_eq!(ms(&tl.gaps()), vec![600, 600, 600, 900, 700, 700, 700, 900, 600, 600, 600]);
        assert_eq!(delays_decode(&tl, &DelayCode::default()).unwrap(), sos);
    }

    #[test]
    fn empty_message_and_padding() {
        let tl = delays_encode(&[0.2; 5], &MorseSequence::default(), &DelayCode::default()).unwrap();
        assert!(tl.gaps().iter().all(|g| (g - 0.5).abs() < 1e-12));
        assert!(delays_decode(&tl, &DelayCode::default()).unwrap().is_empty());

        let sos = text_to_morse("SOS").unwrap();
        let padded = delays_encode(&[0.3; 20], &sos, &DelayCode::default()).unwrap();
        assert_eq!(delays_decode(&padded, &DelayCode::default()).unwrap(), sos);
    }

    #[test]
    fn not_enough_utterances() {
        let sos = text_to_morse("SOS").unwrap();
        assert_eq!(
            delays_encode(&[0.3; 11], &sos, &DelayCode::default()),
            Err(TimingError::NotEnoughUtterances { symbols: 11, needed: 12, available: 11 })
        );
    }

    #[test]
    fn classification_boundaries() {
        let c = DelayCode::default();
        assert_eq!(c.thresholds(), [0.05, 0.15000000000000002, 0.30000000000000004, 0.6000000000000001]);
        assert_eq!(c.classify(0.5), None);
        assert_eq!(c.classify(0.3), None);
        assert_eq!(c.classify(0.56), Some(MorseSymbol::Dot));
        assert_eq!(c.classify(0.74), Some(MorseSymbol::Dash));
        assert_eq!(c.classify(0.81), Some(MorseSymbol::LetterGap));
        assert_eq!(c.classify(1.2), Some(MorseSymbol::WordGap));
    }

    #[test]
    fn decode_errors() {
        let c = DelayCode::default();
        let one = EventTimeline::new(vec![Utterance { onset: 0.0, duration: 1.0 }]).unwrap();
        assert_eq!(delays_decode(&one, &c), Err(TimingError::TooFewEvents(1)));
        let far =
            EventTimeline::new(vec![Utterance { onset: 0.0, duration: 0.3 }, Utterance { onset: 2.5, duration: 0.3 }])
                .unwrap();
        assert!(matches!(delays_decode(&far, &c), Err(TimingError::GapOutOfRange { index: 0, .. })));
        let leading_gap =
            EventTimeline::new(vec![Utterance { onset: 0.0, duration: 0.3 }, Utterance { onset: 1.2, duration: 0.3 }])
                .unwrap();
        assert!(matches!(delays_decode(&leading_gap, &c), Err(TimingError::Morse(_))));
    }

    #[test]
    fn timeline_validation() {
        let u = |onset, duration| Utterance { onset, duration };
        assert!(EventTimeline::new(vec![u(0.0, 1.0), u(0.5, 1.0)]).is_err());
        assert!(EventTimeline::new(vec![u(1.0, 0.1), u(1.0, 0.1)]).is_err());
        assert!(EventTimeline::new(vec![u(0.0, -0.1)]).is_err());
        assert!(EventTimeline::new(vec![u(0.0, 1.0), u(1.0, 1.0)]).is_ok());
    }

    #[test]
    fn code_validation() {
        let c = DelayCode { dash_extra: 0.05, ..DelayCode::default() };
        assert!(c.validate().is_err());
        let parsed: DelayCode = serde_json::from_str(r#"{"base_gap":0.6}"#).unwrap();
        assert_eq!(parsed.dot_extra, 0.1);
    }
}
