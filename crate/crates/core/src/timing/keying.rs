//! On/off keying with standard Morse proportions, e.g. a gripper closing
//! for dots and dashes.

use serde::{Deserialize, Serialize};

use super::{EventTimeline, TimingError, Utterance};
use crate::message::{MorseSequence, MorseSymbol};

/// Unit length in seconds: dot 1, dash 3, intra-letter gap 1, letter gap 3,
/// word gap 7 units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyingCode {
    pub unit: f64,
}

impl Default for KeyingCode {
    fn default() -> Self {
        KeyingCode { unit: 0.3 }
    }
}

pub fn keying_encode(msg: &MorseSequence, code: &KeyingCode) -> Result<EventTimeline, TimingError> {
    if !(code.unit > 0.0) {
        return Err(TimingError::InvalidCode("keying unit must be positive".into()));
    }
    let u = code.unit;
    let mut events = Vec::new();
    let mut t = 0.0;
    let mut pending_gap = 0.0;
    for &s in msg.symbols() {
        match s {
            MorseSymbol::Dot | MorseSymbol::Dash => {
                t += pending_gap;
                let duration = if s == MorseSymbol::Dot { u } else { 3.0 * u };
                events.push(Utterance { onset: t, duration });
                t += duration;
                pending_gap = u;
            }
            MorseSymbol::LetterGap => pending_gap = 3.0 * u,
            MorseSymbol::WordGap => pending_gap = 7.0 * u,
        }
    }
    EventTimeline::new(events)
}

pub fn keying_decode(timeline: &EventTimeline, code: &KeyingCode) -> Result<MorseSequence, TimingError> {
    let u = code.unit;
    let mut symbols = Vec::new();
    for (i, e) in timeline.events().iter().enumerate() {
        if i > 0 {
            let gap = e.onset - timeline.events()[i - 1].end();
            if gap >= 5.0 * u {
                symbols.push(MorseSymbol::WordGap);
            } else if gap >= 2.0 * u {
                symbols.push(MorseSymbol::LetterGap);
            }
        }
        symbols.push(if e.duration < 2.0 * u { MorseSymbol::Dot } else { MorseSymbol::Dash });
    }
    Ok(MorseSequence::new(symbols)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::message::text_to_morse;

    #[test]
    fn sos_schedule() {
        let code = KeyingCode { unit: 0.1 };
        let sos = text_to_morse("SOS").unwrap();
        let tl = keying_encode(&sos, &code).unwrap();
        assert_eq!(tl.len(), 9);
        let durations: Vec<i64> = tl.events().iter().map(|e| (e.duration * 1000.0).round() as i64).collect();
        assert_eq!(durations, vec![100, 100, 100, 300, 300, 300, 100, 100, 100]);
        let gaps: Vec<i64> = tl.gaps().iter().map(|g| (g * 1000.0).round() as i64).collect();
        assert_eq!(gaps, vec![100, 100, 300, 100, 100, 300, 100, 100]);
        assert_eq!(keying_decode(&tl, &code).unwrap(), sos);
    }

    #[test]
    fn words() {
        let code = KeyingCode::default();
        let msg = text_to_morse("HI MOM").unwrap();
        assert_eq!(keying_decode(&keying_encode(&msg, &code).unwrap(), &code).unwrap(), msg);
    }
}
