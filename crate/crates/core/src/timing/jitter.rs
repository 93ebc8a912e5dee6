use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{delays_decode, delays_encode, DelayCode, EventTimeline, TimingError, Utterance};
use crate::message::MorseSequence;
use crate::rng::substream;

/// Outcome of many noisy transmissions at one jitter level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JitterStats {
    pub sigma: f64,
    pub trials: u64,
    /// Trials whose decoded sequence equals the message.
    pub exact: u64,
    /// Gaps read as the wrong level, counting out-of-range gaps.
    pub gap_errors: u64,
    pub gaps: u64,
}

impl JitterStats {
    pub fn success_rate(&self) -> f64 {
        self.exact as f64 / self.trials as f64
    }

    pub fn symbol_error_rate(&self) -> f64 {
        self.gap_errors as f64 / self.gaps as f64
    }
}

/// Adds independent Gaussian noise of `sigma` seconds to every gap, keeping
/// utterance durations, and shifts later utterances accordingly.
pub fn jitter_gaps(timeline: &EventTimeline, noise: &[f64]) -> Result<EventTimeline, TimingError> {
    let ev = timeline.events();
    let Some(first) = ev.first() else {
        return Ok(timeline.clone());
    };
    let mut out = vec![*first];
    for (i, (gap, dn)) in timeline.gaps().into_iter().zip(noise).enumerate() {
        let prev = out[i].end();
        out.push(Utterance { onset: prev + gap + dn, duration: ev[i + 1].duration });
    }
    EventTimeline::new(out)
}

/// Monte-Carlo over `trials` transmissions of `msg` per sigma. Trial `k`
/// draws the same standard-normal vector at every sigma, so error counts
/// are comparable across levels; results do not depend on thread count.
pub fn jitter_sweep(
    msg: &MorseSequence,
    code: &DelayCode,
    durations: &[f64],
    sigmas: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<JitterStats>, TimingError> {
    let clean = delays_encode(durations, msg, code)?;
    let intended: Vec<_> = clean.gaps().iter().map(|&g| code.classify(g)).collect();
    let n_gaps = intended.len();
    if let Some(s) = sigmas.iter().find(|s| !(**s >= 0.0)) {
        return Err(TimingError::InvalidCode(format!("jitter sigma {s} must be non-negative")));
    }

    let per_trial: Vec<Vec<(bool, u64)>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, k);
            let z: Vec<f64> = (0..n_gaps).map(|_| StandardNormal.sample(&mut rng)).collect();
            sigmas
                .iter()
                .map(|&sigma| {
                    let noise: Vec<f64> = z.iter().map(|v| v * sigma).collect();
                    let wrong = clean
                        .gaps()
                        .iter()
                        .zip(&noise)
                        .zip(&intended)
                        .filter(|((&g, &dn), &want)| {
                            let got = g + dn;
                            got - code.base_gap > code.ceiling() || code.classify(got) != want
                        })
                        .count() as u64;
                    let exact =
                        jitter_gaps(&clean, &noise).and_then(|tl| delays_decode(&tl, code)).is_ok_and(|m| &m == msg);
                    (exact, wrong)
                })
                .collect()
        })
        .collect();

    Ok(sigmas
        .iter()
        .enumerate()
        .map(|(j, &sigma)| JitterStats {
            sigma,
            trials,
            exact: per_trial.iter().filter(|t| t[j].0).count() as u64,
            gap_errors: per_trial.iter().map(|t| t[j].1).sum(),
            gaps: trials * n_gaps as u64,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::message::text_to_morse;

    #[test]
    fn zero_jitter_is_lossless() {
        let msg = text_to_morse("SOS").unwrap();
        let s = jitter_sweep(&msg, &DelayCode::default(), &[0.3; 12], &[0.0], 50, 1).unwrap();
        assert_eq!(s[0].exact, 50);
        assert_eq!(s[0].gap_errors, 0);
        assert_eq!(s[0].gaps, 550);
    }

    #[test]
    fn heavy_jitter_breaks_the_channel() {
        let msg = text_to_morse("SOS").unwrap();
        let s = jitter_sweep(&msg, &DelayCode::default(), &[0.3; 12], &[0.06], 2000, 2).unwrap();
        assert!(s[0].symbol_error_rate() >= 0.10, "{}", s[0].symbol_error_rate());
    }

    #[test]
    fn shifted_gaps() {
        let msg = text_to_morse("E").unwrap();
        let tl = delays_encode(&[0.2, 0.2], &msg, &DelayCode::default()).unwrap();
        let j = jitter_gaps(&tl, &[0.05]).unwrap();
        assert!((j.gaps()[0] - 0.65).abs() < 1e-12);
    }
}
